#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmx/dataset.hpp"
#include "mmx/memory.hpp"
#include "mmx/minimax.hpp"
#include "mmx/rng.hpp"

namespace mmx {

/// Object -> sample partition. Every object carries exactly one id, and the
/// ids are already dense sample indices 0..n_subsets-1 (final subsets are
/// reindexed by their smallest member object when the assignment is built,
/// so no separate id-to-index map is needed).
struct SubsetAssignment {
  std::vector<int> subset_id;
  int n_subsets = 0;
};

inline std::int64_t tracked_entries(const SubsetAssignment& a) {
  return static_cast<std::int64_t>(a.subset_id.size());
}

enum class SamplerMethod { mm, kmeans, dpp, random };

std::string to_string(SamplerMethod method);
SamplerMethod parse_sampler_method(const std::string& name);

struct SampleSet {
  SamplerMethod method = SamplerMethod::mm;
  SubsetAssignment assignment;
  /// Centroids (kmeans) or selected object rows (dpp/random); absent for mm,
  /// whose samples are the merged subsets themselves.
  std::optional<RowMatrixXd> representatives;
  int s = 0;
  std::uint64_t seed = 0;
};

/// {method, seed, subset_id} record for offline-sampling workflows.
std::string sample_set_to_json(const SampleSet& samples);
void save_sample_set(const SampleSet& samples, const std::string& path);

/// Number of samples for a dataset of n objects: ceil(sqrt(n)), unless
/// overridden (override must stay in [2, n]).
int default_sample_count(int n, int override_count = 0);

struct MmSampleResult {
  SampleSet samples;
  MinimaxMatrix sample_minimax;  // M_s, s x s
};

/// Minimax-adaptive sampling: sorts the MST edges ascending (ties by
/// endpoint pair), merges subsets along the first n-s edges, then keeps
/// merging with the remaining s-1 edges to fill M_s -- each of those merges
/// writes its edge weight as the minimax distance between every pair of
/// final subsets it joins. Merging uses disjoint sets instead of the
/// relabel-everything loop; the resulting partition is identical.
MmSampleResult mm_sample(const MstEdgeList& mst, int num_samples = 0,
                         MemoryMeter* meter = nullptr);

/// k-means clustering with k = ceil(sqrt(N)); cluster centroids are the
/// samples and each object belongs to its cluster.
SampleSet kmeans_sample(const DataMatrix& data, const Dissimilarity& f,
                        std::uint64_t seed, int num_samples = 0);

/// ceil(sqrt(N)) objects drawn uniformly without replacement; every object
/// is assigned to the nearest selected object under f (ties to the lowest
/// sample index).
SampleSet random_sample(const DataMatrix& data, const Dissimilarity& f,
                        std::uint64_t seed, int num_samples = 0);

/// Symmetric positive-semidefinite similarity kernel for DPP sampling.
struct DppKernel {
  Eigen::MatrixXd entries;
  int size() const { return static_cast<int>(entries.rows()); }
};

/// RBF similarity exp(-f(i,j)/(2 sigma^2)) with sigma^2 the median of f
/// over 1000 random pairs (positive values only).
DppKernel build_dpp_kernel(const DataMatrix& data, const Dissimilarity& f,
                           std::uint64_t seed);

/// One k-DPP draw from the kernel: k distinct indices, subset probability
/// proportional to det(K_A). Eigendecomposition plus elementary symmetric
/// polynomials select the eigenvector subset, then a projection-DPP pass
/// picks the items.
std::vector<int> kdpp_draw(const DppKernel& kernel, int k, Rng& rng);

/// k-DPP sampling of ceil(sqrt(N)) diverse objects. The kernel is N x N,
/// so this sampler is an offline companion and is capped.
SampleSet dpp_sample(const DataMatrix& data, const Dissimilarity& f,
                     std::uint64_t seed, int num_samples = 0, int cap = 3000);

/// M_s for representative-based samplers: pairwise minimax distances on the
/// complete graph over the s representatives (via prim + minimax_from_mst).
/// mm samples carry their own M_s out of mm_sample.
MinimaxMatrix sample_minimax(const SampleSet& samples, const Dissimilarity& f,
                             MemoryMeter* meter = nullptr);

}  // namespace mmx
