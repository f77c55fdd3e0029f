#include "mmx/sampling.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mmx/kmeans.hpp"
#include "mmx/rng.hpp"
#include "mmx/union_find.hpp"

namespace mmx {

std::string to_string(SamplerMethod method) {
  switch (method) {
    case SamplerMethod::mm: return "mm";
    case SamplerMethod::kmeans: return "kmeans";
    case SamplerMethod::dpp: return "dpp";
    case SamplerMethod::random: return "random";
  }
  return "?";
}

SamplerMethod parse_sampler_method(const std::string& name) {
  if (name == "mm") return SamplerMethod::mm;
  if (name == "kmeans") return SamplerMethod::kmeans;
  if (name == "dpp") return SamplerMethod::dpp;
  if (name == "random") return SamplerMethod::random;
  throw std::invalid_argument("unknown sampler method '" + name + "'");
}

int default_sample_count(int n, int override_count) {
  if (override_count != 0) {
    if (override_count < 2 || override_count > n) {
      throw std::invalid_argument("sample count override must be in [2, N]");
    }
    return override_count;
  }
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
}

std::string sample_set_to_json(const SampleSet& samples) {
  nlohmann::ordered_json j;
  j["method"] = to_string(samples.method);
  j["seed"] = samples.seed;
  j["subset_id"] = samples.assignment.subset_id;
  return j.dump();
}

void save_sample_set(const SampleSet& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_sample_set: cannot open '" + path + "'");
  out << sample_set_to_json(samples) << '\n';
}

namespace {

std::vector<MstEdge> sorted_edges(const MstEdgeList& mst) {
  std::vector<MstEdge> edges = mst.edges;
  std::sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return edges;
}

/// Nearest-representative assignment under f, ties to the lowest sample
/// index. Streams over objects, O(N) memory. Empty samples (possible only
/// with duplicate representatives) are compressed out.
SampleSet assign_to_representatives(SamplerMethod method, const DataMatrix& data,
                                    const Dissimilarity& f, RowMatrixXd representatives,
                                    std::uint64_t seed) {
  const int n = static_cast<int>(data.n_objects());
  const int s = static_cast<int>(representatives.rows());
  DataMatrix reps;
  reps.values = representatives;

  std::vector<int> raw(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < s; ++c) {
      double d = 0.0;
      switch (f.kind()) {
        case DissimilarityKind::squared_euclidean:
          d = (data.values.row(i) - reps.values.row(c)).squaredNorm();
          break;
      }
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    raw[i] = best;
  }

  std::vector<int> used(s, -1);
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (used[raw[i]] < 0) {
      used[raw[i]] = static_cast<int>(keep.size());
      keep.push_back(raw[i]);
    }
  }

  SampleSet out;
  out.method = method;
  out.seed = seed;
  out.s = static_cast<int>(keep.size());
  out.assignment.n_subsets = out.s;
  out.assignment.subset_id.resize(n);
  for (int i = 0; i < n; ++i) out.assignment.subset_id[i] = used[raw[i]];
  RowMatrixXd kept(out.s, representatives.cols());
  for (int c = 0; c < out.s; ++c) kept.row(c) = representatives.row(keep[c]);
  out.representatives = std::move(kept);
  return out;
}

}  // namespace

MmSampleResult mm_sample(const MstEdgeList& mst, int num_samples, MemoryMeter* meter) {
  const int n = mst.n_objects;
  if (n < 4) throw std::invalid_argument("mm_sample: need at least 4 objects");
  if (static_cast<int>(mst.edges.size()) != n - 1) {
    throw std::invalid_argument("mm_sample: edge list has " + std::to_string(mst.edges.size()) +
                                " edges, expected " + std::to_string(n - 1));
  }
  const int s = default_sample_count(n, num_samples);

  std::vector<MstEdge> edges = sorted_edges(mst);

  // Merge the n-s lightest edges; afterwards exactly s subsets remain.
  MemoryLease dsu_lease(meter, 2 * static_cast<std::int64_t>(n), "subset merge DSU");
  UnionFind dsu(n);
  for (int i = 0; i < n - s; ++i) {
    if (!dsu.unite(edges[i].u, edges[i].v)) {
      throw std::invalid_argument("mm_sample: edge list contains a cycle");
    }
  }

  // Final subsets reindexed densely by smallest member object index.
  if (meter) meter->acquire(n, "SubsetID vector");
  SampleSet samples;
  samples.method = SamplerMethod::mm;
  samples.s = s;
  samples.assignment.n_subsets = s;
  samples.assignment.subset_id.assign(n, -1);
  {
    std::vector<int> dense_of_root(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
      const int root = dsu.find(i);
      if (dense_of_root[root] < 0) dense_of_root[root] = next++;
      samples.assignment.subset_id[i] = dense_of_root[root];
    }
    if (next != s) {
      throw std::invalid_argument("mm_sample: edge list does not span all objects");
    }
  }

  // Keep merging with the remaining s-1 edges (the s-1 largest minimax
  // distances): each merge writes its weight into M_s for every pair of
  // final subsets that sit on opposite sides.
  if (meter) meter->acquire(static_cast<std::int64_t>(s) * s, "sample minimax matrix M_s");
  MinimaxMatrix ms(s);
  {
    MemoryLease group_lease(meter, 2 * static_cast<std::int64_t>(s), "subset group bookkeeping");
    std::vector<int> group(s);
    for (int g = 0; g < s; ++g) group[g] = g;
    std::vector<std::vector<int>> members(s);
    for (int g = 0; g < s; ++g) members[g] = {g};

    for (int i = n - s; i < n - 1; ++i) {
      const MstEdge& e = edges[i];
      int ga = group[samples.assignment.subset_id[e.u]];
      int gb = group[samples.assignment.subset_id[e.v]];
      if (ga == gb) {
        throw std::invalid_argument("mm_sample: edge list contains a cycle");
      }
      if (members[ga].size() < members[gb].size()) std::swap(ga, gb);
      for (int a : members[ga]) {
        for (int b : members[gb]) {
          ms.set(a, b, e.weight);
        }
      }
      for (int b : members[gb]) group[b] = ga;
      members[ga].insert(members[ga].end(), members[gb].begin(), members[gb].end());
      members[gb].clear();
      members[gb].shrink_to_fit();
    }
  }

  return {std::move(samples), std::move(ms)};
}

SampleSet kmeans_sample(const DataMatrix& data, const Dissimilarity& f, std::uint64_t seed,
                        int num_samples) {
  const int n = static_cast<int>(data.n_objects());
  if (n < 4) throw std::invalid_argument("kmeans_sample: need at least 4 objects");
  const int k = default_sample_count(n, num_samples);

  Rng rng(seed);
  KMeansResult km = kmeans(data.values, k, rng);
  // Assignment straight from the clustering; compress any empty clusters.
  return assign_to_representatives(SamplerMethod::kmeans, data, f, km.centroids, seed);
}

SampleSet random_sample(const DataMatrix& data, const Dissimilarity& f, std::uint64_t seed,
                        int num_samples) {
  const int n = static_cast<int>(data.n_objects());
  if (n < 4) throw std::invalid_argument("random_sample: need at least 4 objects");
  const int k = default_sample_count(n, num_samples);

  Rng rng(seed);
  const std::vector<int> chosen = rng.sample_without_replacement(n, k);
  RowMatrixXd reps(k, data.n_features());
  for (int c = 0; c < k; ++c) reps.row(c) = data.values.row(chosen[c]);
  return assign_to_representatives(SamplerMethod::random, data, f, std::move(reps), seed);
}

DppKernel build_dpp_kernel(const DataMatrix& data, const Dissimilarity& f, std::uint64_t seed) {
  const int n = static_cast<int>(data.n_objects());
  Rng rng(seed);

  // median-of-f bandwidth over 1000 random pairs, positive values only
  std::vector<double> probe;
  probe.reserve(1000);
  for (int t = 0; t < 1000; ++t) {
    const int i = rng.next_int(n);
    const int j = rng.next_int(n);
    if (i == j) continue;
    const double d = f(data, i, j);
    if (d > 0.0) probe.push_back(d);
  }
  double sigma_sq = 1.0;
  if (!probe.empty()) {
    std::sort(probe.begin(), probe.end());
    sigma_sq = probe[probe.size() / 2];
  }

  DppKernel kernel;
  kernel.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    kernel.entries(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double v = std::exp(-f(data, i, j) / (2.0 * sigma_sq));
      kernel.entries(i, j) = v;
      kernel.entries(j, i) = v;
    }
  }
  return kernel;
}

std::vector<int> kdpp_draw(const DppKernel& kernel, int k, Rng& rng) {
  const int n = kernel.size();
  if (k < 1 || k > n) throw std::invalid_argument("kdpp_draw: need 1 <= k <= N");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel.entries);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("kdpp_draw: kernel eigendecomposition failed");
  }
  Eigen::VectorXd lambda = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  for (int i = 0; i < n; ++i) {
    if (lambda[i] < 0.0) lambda[i] = 0.0;  // numerical negatives of a PSD kernel
  }

  // Rescale eigenvalues by their mean; for fixed k the k-DPP distribution is
  // scale invariant and the symmetric polynomials stay in range.
  double mean = lambda.sum() / n;
  if (mean <= 0.0) throw std::runtime_error("kdpp_draw: kernel has no positive eigenvalues");
  Eigen::VectorXd lam = lambda / mean;

  // elementary symmetric polynomials: esp(l, m) over the first m eigenvalues
  std::vector<std::vector<long double>> esp(k + 1, std::vector<long double>(n + 1, 0.0L));
  for (int m = 0; m <= n; ++m) esp[0][m] = 1.0L;
  for (int l = 1; l <= k; ++l) {
    for (int m = 1; m <= n; ++m) {
      esp[l][m] = esp[l][m - 1] + static_cast<long double>(lam[m - 1]) * esp[l - 1][m - 1];
    }
  }

  // pick the eigenvector subset for a size-k draw
  std::vector<int> chosen_cols;
  int remaining = k;
  for (int m = n; m >= 1 && remaining > 0; --m) {
    double p;
    if (m == remaining) {
      p = 1.0;
    } else if (esp[remaining][m] <= 0.0L) {
      continue;
    } else {
      p = static_cast<double>(static_cast<long double>(lam[m - 1]) * esp[remaining - 1][m - 1] /
                              esp[remaining][m]);
    }
    if (rng.next_double() < p) {
      chosen_cols.push_back(m - 1);
      --remaining;
    }
  }
  if (remaining != 0) throw std::runtime_error("kdpp_draw: eigenvector selection failed");

  Eigen::MatrixXd v(n, k);
  for (int c = 0; c < k; ++c) v.col(c) = vectors.col(chosen_cols[c]);

  // projection-DPP pass: draw an item by row mass, then condition the
  // remaining subspace on missing it
  std::vector<int> items;
  items.reserve(k);
  std::vector<double> mass(n);
  for (int t = k; t >= 1; --t) {
    for (int i = 0; i < n; ++i) mass[i] = v.leftCols(t).row(i).squaredNorm();
    const int picked = rng.pick_weighted(mass);
    items.push_back(picked);
    if (t == 1) break;

    int pivot = 0;
    double biggest = -1.0;
    for (int c = 0; c < t; ++c) {
      const double a = std::abs(v(picked, c));
      if (a > biggest) {
        biggest = a;
        pivot = c;
      }
    }
    if (!(biggest > 0.0)) throw std::runtime_error("kdpp_draw: degenerate projection step");
    const Eigen::VectorXd pivot_col = v.col(pivot);
    if (pivot != t - 1) v.col(pivot) = v.col(t - 1);
    for (int c = 0; c < t - 1; ++c) {
      v.col(c) -= pivot_col * (v(picked, c) / pivot_col(picked));
    }
    // re-orthonormalize the surviving columns
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(v.leftCols(t - 1));
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, t - 1);
    v.leftCols(t - 1) = q;
  }

  std::sort(items.begin(), items.end());
  return items;
}

SampleSet dpp_sample(const DataMatrix& data, const Dissimilarity& f, std::uint64_t seed,
                     int num_samples, int cap) {
  const int n = static_cast<int>(data.n_objects());
  if (n < 4) throw std::invalid_argument("dpp_sample: need at least 4 objects");
  if (n > cap) {
    throw std::invalid_argument("dpp_sample: N=" + std::to_string(n) + " exceeds the DPP cap " +
                                std::to_string(cap) + " (this sampler runs offline)");
  }
  const int k = default_sample_count(n, num_samples);

  const DppKernel kernel = build_dpp_kernel(data, f, derive_seed(seed, 0));
  Rng rng(derive_seed(seed, 1));
  const std::vector<int> chosen = kdpp_draw(kernel, k, rng);

  RowMatrixXd reps(k, data.n_features());
  for (int c = 0; c < k; ++c) reps.row(c) = data.values.row(chosen[c]);
  return assign_to_representatives(SamplerMethod::dpp, data, f, std::move(reps), seed);
}

MinimaxMatrix sample_minimax(const SampleSet& samples, const Dissimilarity& f,
                             MemoryMeter* meter) {
  if (samples.method == SamplerMethod::mm) {
    throw std::invalid_argument("sample_minimax: mm samples carry M_s out of mm_sample");
  }
  if (!samples.representatives) {
    throw std::invalid_argument("sample_minimax: sample set has no representatives");
  }
  DataMatrix reps;
  reps.values = *samples.representatives;
  const MstEdgeList mst = prim_incremental(reps, f, 0, meter);
  MinimaxMatrix ms = minimax_from_mst(mst, samples.s, meter);
  if (meter) meter->release(tracked_entries(mst));
  return ms;
}

}  // namespace mmx
