#include "mmx/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmx/rng.hpp"

namespace mmx {

MinimaxMatrix::MinimaxMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("MinimaxMatrix: matrix must be square");
  }
}

MstEdgeList prim_incremental(const DataMatrix& data, const Dissimilarity& f,
                             std::uint64_t seed, MemoryMeter* meter) {
  const int n = static_cast<int>(data.n_objects());
  if (n < 2) throw std::invalid_argument("prim_incremental: need at least 2 objects");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  MemoryLease aux(meter, 2 * static_cast<std::int64_t>(n), "prim l/parent vectors");
  if (meter) meter->acquire(3 * static_cast<std::int64_t>(n - 1), "MST edge list T");

  Rng rng(seed);
  const int start = rng.next_int(n);

  std::vector<double> best(n);   // l: dissimilarity to the current tree
  std::vector<int> parent(n, start);
  for (int i = 0; i < n; ++i) best[i] = f(data, start, i);
  best[start] = kInf;  // +inf marks membership in C

  MstEdgeList mst;
  mst.n_objects = n;
  mst.edges.reserve(n - 1);
  for (int step = 0; step < n - 1; ++step) {
    int u = -1;
    double u_best = kInf;
    for (int i = 0; i < n; ++i) {
      if (best[i] < u_best) {  // strict: ties go to the lowest index
        u_best = best[i];
        u = i;
      }
    }
    if (u < 0) throw std::logic_error("prim_incremental: no selectable object");
    mst.edges.push_back({u_best, parent[u], u});
    best[u] = kInf;
    for (int i = 0; i < n; ++i) {
      if (best[i] == kInf) continue;
      const double d = f(data, u, i);
      if (d < best[i]) {
        best[i] = d;
        parent[i] = u;
      }
    }
  }

  mst.peak_aux_entries = 2 * static_cast<std::int64_t>(n) + 3 * static_cast<std::int64_t>(n - 1);
  return mst;
}

MinimaxMatrix minimax_oracle(const DataMatrix& data, const Dissimilarity& f, int cap) {
  const int n = static_cast<int>(data.n_objects());
  if (n > cap) {
    throw std::invalid_argument("minimax_oracle: N=" + std::to_string(n) +
                                " exceeds the oracle cap " + std::to_string(cap));
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = f(data, i, j);
      m(i, j) = d;
      m(j, i) = d;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double through = std::max(m(i, k), m(k, j));
        if (through < m(i, j)) m(i, j) = through;
      }
    }
  }
  return MinimaxMatrix(std::move(m));
}

MinimaxMatrix minimax_from_mst(const MstEdgeList& mst, int dense_cap, MemoryMeter* meter) {
  const int n = mst.n_objects;
  if (n > dense_cap) {
    throw std::invalid_argument("minimax_from_mst: N=" + std::to_string(n) +
                                " exceeds the dense cap " + std::to_string(dense_cap));
  }
  if (static_cast<int>(mst.edges.size()) != n - 1) {
    throw std::invalid_argument("minimax_from_mst: edge list has " +
                                std::to_string(mst.edges.size()) + " edges, expected " +
                                std::to_string(n - 1));
  }

  std::vector<MstEdge> edges = mst.edges;
  std::sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  if (meter) {
    meter->acquire(static_cast<std::int64_t>(n) * n, "dense minimax matrix");
  }
  MinimaxMatrix result(n);
  MemoryLease aux(meter, 2 * static_cast<std::int64_t>(n), "merge bookkeeping");

  // Merge components in ascending weight order; the joining edge's weight is
  // the minimax distance between every cross pair. The smaller member list
  // is relabeled into the larger one.
  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = i;
  std::vector<std::vector<int>> members(n);
  for (int i = 0; i < n; ++i) members[i] = {i};

  for (const MstEdge& e : edges) {
    int ca = comp[e.u];
    int cb = comp[e.v];
    if (ca == cb) {
      throw std::invalid_argument("minimax_from_mst: edge list contains a cycle");
    }
    if (members[ca].size() < members[cb].size()) std::swap(ca, cb);
    for (int i : members[ca]) {
      for (int j : members[cb]) {
        result.set(i, j, e.weight);
      }
    }
    for (int j : members[cb]) comp[j] = ca;
    members[ca].insert(members[ca].end(), members[cb].begin(), members[cb].end());
    members[cb].clear();
    members[cb].shrink_to_fit();
  }
  if (static_cast<int>(members[comp[0]].size()) != n) {
    throw std::invalid_argument("minimax_from_mst: edge list does not span all objects");
  }
  return result;
}

}  // namespace mmx
