#include "doctest.h"

#include <vector>

#include "mmx/evaluation.hpp"
#include "mmx/rng.hpp"
#include "oracles.hpp"

using namespace mmx;

namespace {

std::vector<int> random_labels(int n, int classes, Rng& rng) {
  std::vector<int> labels(n);
  for (int& l : labels) l = rng.next_int(classes);
  return labels;
}

}  // namespace

TEST_CASE("identical labelings score a perfect 1.0 on all three metrics") {
  const std::vector<int> labels{0, 1, 1, 2, 0, 2, 2};
  const EvalScores scores = evaluate(labels, labels);
  CHECK(scores.m1_rand == 1.0);
  CHECK(scores.m2_mutual_info == 1.0);
  CHECK(scores.m3_v_measure == 1.0);
}

TEST_CASE("renaming clusters does not change a perfect score") {
  const std::vector<int> truth{0, 0, 1, 1, 2, 2};
  const std::vector<int> renamed{5, 5, 3, 3, 4, 4};
  const EvalScores scores = evaluate(renamed, truth);
  CHECK(scores.m1_rand == 1.0);
  CHECK(scores.m2_mutual_info == 1.0);
  CHECK(scores.m3_v_measure == 1.0);
}

TEST_CASE("the fully-crossed 2x2 case matches its hand computation") {
  const std::vector<int> pred{0, 0, 1, 1};
  const std::vector<int> truth{0, 1, 0, 1};
  const EvalScores scores = evaluate(pred, truth);
  // All six pairs enumerated by hand: 0 agreements in both, so the index
  // falls below its expectation.
  CHECK(scores.m1_rand == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(scores.m1_rand ==
        doctest::Approx(oracles::adjusted_rand_pair_counting(pred, truth)).epsilon(1e-12));
  // MI is exactly 0 while its hypergeometric expectation is log(2)/3.
  CHECK(scores.m2_mutual_info == doctest::Approx(-0.5).epsilon(1e-9));
  // Both conditional entropies equal the marginals, so h = c = 0.
  CHECK(scores.m3_v_measure == 0.0);
}

// Reference values frozen from an independent implementation of the same
// metric definitions (pair-counting adjusted Rand, hypergeometric-adjusted
// mutual information with max-entropy normalization, v-measure at beta=1).
TEST_CASE("scores match independently computed references") {
  struct Fixture {
    std::vector<int> truth;
    std::vector<int> pred;
    double m1, m2, m3;
  };
  const Fixture fixtures[] = {
      {{0, 0, 1, 1, 2, 2}, {0, 0, 1, 2, 2, 2},
       0.4444444444444444, 0.4655775706051272, 0.739667376800759},
      {{0, 0, 0, 1, 1, 1, 2, 2}, {0, 1, 0, 1, 0, 1, 2, 2},
       0.23809523809523808, 0.3196726505696468, 0.5588730382170323},
      {{1, 1, 0, 0, 2, 2, 2}, {0, 0, 1, 1, 2, 2, 1},
       0.475, 0.5701874864698765, 0.7471790950662619},
  };
  for (const Fixture& fx : fixtures) {
    const EvalScores scores = evaluate(fx.pred, fx.truth);
    CHECK(scores.m1_rand == doctest::Approx(fx.m1).epsilon(1e-9));
    CHECK(scores.m2_mutual_info == doctest::Approx(fx.m2).epsilon(1e-9));
    CHECK(scores.m3_v_measure == doctest::Approx(fx.m3).epsilon(1e-9));
  }
}

TEST_CASE("adjusted rand agrees with pair counting on random labelings") {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.next_int(49);
    const int classes = 1 + rng.next_int(6);
    const std::vector<int> truth = random_labels(n, classes, rng);
    const std::vector<int> pred = random_labels(n, classes, rng);
    const EvalScores scores = evaluate(pred, truth);
    const double reference = oracles::adjusted_rand_pair_counting(pred, truth);
    CHECK(scores.m1_rand == doctest::Approx(reference).epsilon(1e-10));
  }
}

TEST_CASE("all metrics are invariant under label permutations") {
  Rng rng(7);
  const std::vector<int> truth = random_labels(40, 4, rng);
  const std::vector<int> pred = random_labels(40, 4, rng);
  const EvalScores base = evaluate(pred, truth);

  const int permutation[] = {3, 0, 2, 1};
  std::vector<int> renamed(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) renamed[i] = permutation[pred[i]];
  const EvalScores after = evaluate(renamed, truth);
  CHECK(after.m1_rand == doctest::Approx(base.m1_rand).epsilon(1e-12));
  CHECK(after.m2_mutual_info == doctest::Approx(base.m2_mutual_info).epsilon(1e-12));
  CHECK(after.m3_v_measure == doctest::Approx(base.m3_v_measure).epsilon(1e-12));
}

TEST_CASE("all metrics are symmetric in pred and truth") {
  Rng rng(19);
  const std::vector<int> a = random_labels(30, 3, rng);
  const std::vector<int> b = random_labels(30, 5, rng);
  const EvalScores ab = evaluate(a, b);
  const EvalScores ba = evaluate(b, a);
  CHECK(ab.m1_rand == doctest::Approx(ba.m1_rand).epsilon(1e-12));
  CHECK(ab.m2_mutual_info == doctest::Approx(ba.m2_mutual_info).epsilon(1e-12));
  CHECK(ab.m3_v_measure == doctest::Approx(ba.m3_v_measure).epsilon(1e-12));
}

TEST_CASE("random labelings score near zero on the adjusted metrics") {
  Rng rng(555);
  double sum_m1 = 0.0;
  double sum_m2 = 0.0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const std::vector<int> truth = random_labels(60, 3, rng);
    const std::vector<int> pred = random_labels(60, 3, rng);
    const EvalScores scores = evaluate(pred, truth);
    sum_m1 += scores.m1_rand;
    sum_m2 += scores.m2_mutual_info;
  }
  CHECK(sum_m1 / trials > -0.05);
  CHECK(sum_m1 / trials < 0.05);
  CHECK(sum_m2 / trials > -0.05);
  CHECK(sum_m2 / trials < 0.05);
}

TEST_CASE("v-measure is 1 only for permutation-diagonal tables") {
  // Merging two truth classes into one predicted cluster keeps homogeneity
  // below 1, so the v-measure must drop.
  const std::vector<int> truth{0, 0, 1, 1, 2, 2};
  const std::vector<int> merged{0, 0, 0, 0, 1, 1};
  const EvalScores scores = evaluate(merged, truth);
  CHECK(scores.m3_v_measure < 1.0);
  CHECK(scores.m3_v_measure > 0.0);
}

TEST_CASE("degenerate labelings follow the usual conventions") {
  // Both sides trivial: treated as perfect agreement.
  const EvalScores both_single = evaluate({0, 0, 0}, {1, 1, 1});
  CHECK(both_single.m1_rand == 1.0);
  CHECK(both_single.m2_mutual_info == 1.0);
  CHECK(both_single.m3_v_measure == 1.0);

  const EvalScores singletons = evaluate({0, 1, 2}, {2, 0, 1});
  CHECK(singletons.m1_rand == 1.0);

  // Uninformative prediction against real structure scores zero.
  const EvalScores uninformative = evaluate({0, 0, 0, 0}, {0, 1, 0, 1});
  CHECK(uninformative.m1_rand == doctest::Approx(0.0));
  CHECK(uninformative.m2_mutual_info == doctest::Approx(0.0));
  CHECK(uninformative.m3_v_measure == doctest::Approx(0.0));
}

TEST_CASE("evaluate rejects mismatched or empty inputs") {
  CHECK_THROWS_AS(evaluate(std::vector<int>{0, 1}, std::vector<int>{0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate(std::vector<int>{}, std::vector<int>{}),
                  std::invalid_argument);
}
