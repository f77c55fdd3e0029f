#pragma once

#include <vector>

#include "mmx/dataset.hpp"
#include "mmx/rng.hpp"

namespace mmx {

struct KMeansResult {
  std::vector<int> labels;   // nearest centroid per point, ties to lowest index
  RowMatrixXd centroids;     // k x D
  double inertia = 0.0;
  int iterations = 0;
};

/// k-means++ seeding: first center uniform, then proportional to the
/// squared-euclidean gap to the closest chosen center.
std::vector<int> kmeans_pp_init(const RowMatrixXd& points, int k, Rng& rng);

/// Lloyd's algorithm with k-means++ seeding. Stops when the relative
/// inertia change drops below rel_tol or at max_iter. Empty clusters are
/// re-seeded from the point farthest from its centroid.
KMeansResult kmeans(const RowMatrixXd& points, int k, Rng& rng, int max_iter = 300,
                    double rel_tol = 1e-6);

}  // namespace mmx
