#include "mmx/kmeans.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmx {

std::vector<int> kmeans_pp_init(const RowMatrixXd& points, int k, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) throw std::invalid_argument("kmeans_pp_init: need 1 <= k <= n");

  std::vector<int> centers;
  centers.reserve(k);
  centers.push_back(rng.next_int(n));
  std::vector<double> min_sq(n);
  for (int i = 0; i < n; ++i) {
    min_sq[i] = (points.row(i) - points.row(centers[0])).squaredNorm();
  }
  while (static_cast<int>(centers.size()) < k) {
    const int next = rng.pick_weighted(min_sq);
    centers.push_back(next);
    for (int i = 0; i < n; ++i) {
      const double d = (points.row(i) - points.row(next)).squaredNorm();
      if (d < min_sq[i]) min_sq[i] = d;
    }
  }
  return centers;
}

KMeansResult kmeans(const RowMatrixXd& points, int k, Rng& rng, int max_iter,
                    double rel_tol) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");

  KMeansResult result;
  result.centroids.resize(k, d);
  const std::vector<int> seeds = kmeans_pp_init(points, k, rng);
  for (int c = 0; c < k; ++c) result.centroids.row(c) = points.row(seeds[c]);

  result.labels.assign(n, 0);
  std::vector<double> dist_to_own(n, 0.0);
  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= max_iter; ++iter) {
    result.iterations = iter;

    // assignment
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - result.centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double dd = (points.row(i) - result.centroids.row(c)).squaredNorm();
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      result.labels[i] = best;
      dist_to_own[i] = best_d;
      inertia += best_d;
    }
    result.inertia = inertia;

    // update
    RowMatrixXd sums = RowMatrixXd::Zero(k, d);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(result.labels[i]) += points.row(i);
      ++counts[result.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        result.centroids.row(c) = sums.row(c) / counts[c];
      } else {
        // re-seed an empty cluster at the farthest point
        int far = 0;
        for (int i = 1; i < n; ++i) {
          if (dist_to_own[i] > dist_to_own[far]) far = i;
        }
        result.centroids.row(c) = points.row(far);
        dist_to_own[far] = 0.0;
      }
    }

    if (std::isfinite(prev_inertia)) {
      const double denom = prev_inertia > 0.0 ? prev_inertia : 1.0;
      if (std::abs(prev_inertia - inertia) / denom < rel_tol) break;
    }
    prev_inertia = inertia;
  }

  // final assignment against the last centroid update
  double inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_d = (points.row(i) - result.centroids.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
      const double dd = (points.row(i) - result.centroids.row(c)).squaredNorm();
      if (dd < best_d) {
        best_d = dd;
        best = c;
      }
    }
    result.labels[i] = best;
    inertia += best_d;
  }
  result.inertia = inertia;
  return result;
}

}  // namespace mmx
