#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "mmx/clustering.hpp"
#include "mmx/rng.hpp"
#include "oracles.hpp"

using namespace mmx;

namespace {

// 1-D embedding with two tight groups around -10 and +10.
Embedding two_far_groups(int per_group, std::uint64_t seed) {
  Embedding e;
  e.d_prime = 1;
  e.coords.resize(2 * per_group, 1);
  Rng rng(seed);
  for (int i = 0; i < per_group; ++i) {
    e.coords(i, 0) = -10.0 + rng.next_gaussian();
    e.coords(per_group + i, 0) = 10.0 + rng.next_gaussian();
  }
  e.spectrum = Eigen::VectorXd::Ones(1);
  return e;
}

// Exact separation check: labels must match the sign of the coordinate,
// up to swapping the two cluster names.
bool separates_at_zero(const Embedding& e, const std::vector<int>& labels) {
  const int negative = labels[0];
  for (int i = 0; i < e.coords.rows(); ++i) {
    const bool is_negative = e.coords(i, 0) < 0.0;
    if (is_negative != (labels[i] == negative)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("gmm separates two distant 1-D clusters exactly") {
  const Embedding e = two_far_groups(12, 3);
  const ClusterLabels labels = gmm_fit_predict(e, 2, 5, 17);
  CHECK(labels.n_clusters == 2);
  CHECK(separates_at_zero(e, labels.labels));
}

TEST_CASE("gmm with one component labels everything zero") {
  const Embedding e = two_far_groups(8, 9);
  const ClusterLabels labels = gmm_fit_predict(e, 1, 3, 5);
  CHECK(std::all_of(labels.labels.begin(), labels.labels.end(),
                    [](int l) { return l == 0; }));
}

TEST_CASE("gmm is deterministic for a fixed seed") {
  const Embedding e = two_far_groups(10, 21);
  const ClusterLabels a = gmm_fit_predict(e, 2, 10, 33);
  const ClusterLabels b = gmm_fit_predict(e, 2, 10, 33);
  CHECK(a.labels == b.labels);
}

TEST_CASE("gmm rejects more components than points") {
  const Embedding e = two_far_groups(2, 1);  // 4 points
  CHECK_THROWS_AS(gmm_fit_predict(e, 5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(gmm_fit_predict(e, 0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(gmm_fit_predict(e, 2, 0, 0), std::invalid_argument);
}

TEST_CASE("gmm collapses identical points into a single cluster") {
  Embedding e;
  e.d_prime = 1;
  e.coords = Eigen::MatrixXd::Constant(6, 1, 2.5);
  e.spectrum = Eigen::VectorXd::Ones(1);
  const ClusterLabels labels = gmm_fit_predict(e, 3, 2, 7);
  CHECK(labels.n_clusters == 1);
  CHECK(std::all_of(labels.labels.begin(), labels.labels.end(),
                    [](int l) { return l == 0; }));
}

TEST_CASE("gmm log-likelihood never decreases during EM") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const Embedding e = two_far_groups(15, seed);
    const GmmFitResult fit = gmm_fit(e, 2, 1, seed);
    const auto& trace = fit.model.log_likelihood_trace;
    REQUIRE(!trace.empty());
    for (std::size_t i = 1; i < trace.size(); ++i) {
      CHECK(trace[i] >= trace[i - 1] - 1e-8);
    }
    CHECK(fit.model.log_likelihood == trace.back());
  }
}

TEST_CASE("gmm model satisfies the mixture invariants") {
  const Embedding e = two_far_groups(12, 41);
  const GmmFitResult fit = gmm_fit(e, 2, 4, 11);
  CHECK(fit.model.n_components == 2);
  CHECK(fit.model.weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.model.weights.minCoeff() >= 0.0);
  CHECK(fit.model.covariances.minCoeff() > 0.0);
  CHECK(fit.model.means.rows() == 2);
  CHECK(fit.model.means.cols() == 1);
}

TEST_CASE("kmeans labels separate distant clusters") {
  const Embedding e = two_far_groups(9, 13);
  const ClusterLabels labels = kmeans_fit_predict(e, 2, 3);
  CHECK(separates_at_zero(e, labels.labels));
}

TEST_CASE("kmeans with k equal to the sample count isolates every point") {
  Embedding e;
  e.d_prime = 1;
  e.coords.resize(5, 1);
  e.coords << 0.0, 1.0, 2.0, 3.0, 4.0;
  e.spectrum = Eigen::VectorXd::Ones(1);
  const ClusterLabels labels = kmeans_fit_predict(e, 5, 1);
  std::set<int> distinct(labels.labels.begin(), labels.labels.end());
  CHECK(distinct.size() == 5);
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
  const Embedding e = two_far_groups(11, 29);
  CHECK(kmeans_fit_predict(e, 2, 41).labels == kmeans_fit_predict(e, 2, 41).labels);
}

TEST_CASE("extend_labels maps objects through their subsets") {
  SampleSet samples;
  samples.s = 2;
  samples.assignment.subset_id = {0, 0, 1, 1};
  samples.assignment.n_subsets = 2;
  const ClusterLabels object_labels =
      extend_labels(ClusterLabels{{0, 1}, 2}, samples);
  CHECK(object_labels.labels == std::vector<int>{0, 0, 1, 1});
  CHECK(object_labels.n_clusters == 2);
}

TEST_CASE("constant sample labels extend to constant object labels") {
  SampleSet samples;
  samples.s = 3;
  samples.assignment.subset_id = {2, 1, 0, 1, 2, 0};
  samples.assignment.n_subsets = 3;
  const ClusterLabels extended = extend_labels(ClusterLabels{{4, 4, 4}, 5}, samples);
  CHECK(extended.labels == std::vector<int>(6, 4));
}

TEST_CASE("permuting sample labels permutes object labels identically") {
  SampleSet samples;
  samples.s = 3;
  samples.assignment.subset_id = {0, 2, 1, 2, 0};
  samples.assignment.n_subsets = 3;
  const ClusterLabels base = extend_labels(ClusterLabels{{0, 1, 2}, 3}, samples);
  const ClusterLabels swapped = extend_labels(ClusterLabels{{2, 0, 1}, 3}, samples);
  const int permutation[] = {2, 0, 1};  // label l -> permutation[l]
  for (std::size_t i = 0; i < base.labels.size(); ++i) {
    CHECK(swapped.labels[i] == permutation[base.labels[i]]);
  }
}

TEST_CASE("extend_labels rejects a length mismatch") {
  SampleSet samples;
  samples.s = 3;
  samples.assignment.subset_id = {0, 1, 2};
  samples.assignment.n_subsets = 3;
  CHECK_THROWS_AS(extend_labels(ClusterLabels{{0, 1}, 2}, samples),
                  std::invalid_argument);
}

TEST_CASE("extension never invents new clusters") {
  const DataMatrix data = oracles::random_points(50, 2, 61);
  const MmSampleResult mm =
      mm_sample(prim_incremental(data, Dissimilarity{}, 0));
  ClusterLabels sample_labels;
  sample_labels.n_clusters = 3;
  Rng rng(4);
  for (int i = 0; i < mm.samples.s; ++i) {
    sample_labels.labels.push_back(rng.next_int(3));
  }
  const ClusterLabels extended = extend_labels(sample_labels, mm.samples);
  const std::set<int> sample_set(sample_labels.labels.begin(), sample_labels.labels.end());
  const std::set<int> object_set(extended.labels.begin(), extended.labels.end());
  CHECK(std::includes(sample_set.begin(), sample_set.end(), object_set.begin(),
                      object_set.end()));
}
