#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mmx/dataset.hpp"
#include "mmx/memory.hpp"

namespace mmx {

struct MstEdge {
  double weight;
  int u;
  int v;
};

/// The (N-1) x 3 edge list of a minimum spanning tree: weight plus the two
/// endpoint indices, in the order the edges were added.
struct MstEdgeList {
  std::vector<MstEdge> edges;
  int n_objects = 0;
  /// Peak auxiliary scalar slots held while building (l, parent, edges).
  std::int64_t peak_aux_entries = 0;
};

inline std::int64_t tracked_entries(const MstEdgeList& t) {
  return 3 * static_cast<std::int64_t>(t.edges.size());
}

/// Symmetric non-negative matrix with zero diagonal which stores pairwise
/// minimax distances (sample scale, or full scale for the dense baseline).
class MinimaxMatrix {
 public:
  MinimaxMatrix() = default;
  explicit MinimaxMatrix(int size) : entries_(Eigen::MatrixXd::Zero(size, size)) {}
  explicit MinimaxMatrix(Eigen::MatrixXd entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  void set(int i, int j, double value) {
    entries_(i, j) = value;
    entries_(j, i) = value;
  }
  const Eigen::MatrixXd& entries() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

inline std::int64_t tracked_entries(const MinimaxMatrix& m) {
  return static_cast<std::int64_t>(m.size()) * m.size();
}

/// Prim's algorithm on the implicit complete graph, never materalizing the
/// pairwise matrix: auxiliary state is the best-dissimilarity vector l
/// (+inf marks selected objects), the parent vector, and the growing edge
/// list. Starts from a seed-chosen object; argmin ties break to the lowest
/// index, so output is deterministic for a fixed seed.
MstEdgeList prim_incremental(const DataMatrix& data, const Dissimilarity& f,
                             std::uint64_t seed, MemoryMeter* meter = nullptr);

/// Floyd-Warshall min/max fixed point on the full dissimilarity matrix.
/// O(N^3) time, O(N^2) memory; exact min/max arithmetic. Capped because it
/// exists as a reference, not a product path.
MinimaxMatrix minimax_oracle(const DataMatrix& data, const Dissimilarity& f,
                             int cap = 500);

/// Pairwise minimax distances from an MST: edges processed in ascending
/// weight order assign their weight as the merge height between the two
/// components they join (single-linkage cophenetic distances). Materializes
/// N x N, so it serves the no-sampling baseline and tests only.
MinimaxMatrix minimax_from_mst(const MstEdgeList& mst, int dense_cap = 5000,
                               MemoryMeter* meter = nullptr);

}  // namespace mmx
