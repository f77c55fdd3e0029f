#pragma once

#include <Eigen/Dense>
#include <string>

#include "mmx/minimax.hpp"

namespace mmx {

/// Full symmetric eigendecomposition, eigenvalues descending, eigenvector
/// signs fixed (largest-magnitude component positive) so results are
/// reproducible across runs and platforms.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // columns match eigenvalues, orthonormal
};

inline std::int64_t tracked_entries(const EigenSystem& e) {
  return static_cast<std::int64_t>(e.eigenvectors.size()) + e.eigenvalues.size();
}

/// Double centering K = -1/2 * J * M * J with J = I - (1/s) 1 1^T: turns the
/// squared-distance matrix into the Gram kernel of classical scaling.
/// Rejects asymmetric or negative input.
Eigen::MatrixXd to_mercer_kernel(const MinimaxMatrix& m);

/// Decomposes a symmetric matrix (symmetric within 1e-10).
EigenSystem eigendecompose(const Eigen::MatrixXd& k);

/// Zeroes eigenvalues in [-rel_tol * lambda_max, 0). Returns how many fell
/// below that band (a PSD-in-theory kernel should produce none; callers
/// surface a warning when it does). Those too are clipped to 0.
int clip_spectrum(EigenSystem& eig, double rel_tol = 1e-9);

struct Embedding {
  Eigen::MatrixXd coords;    // s x d_prime, columns by descending eigenvalue
  int d_prime = 0;
  Eigen::VectorXd spectrum;  // full eigenvalues normalized by the largest
};

inline std::int64_t tracked_entries(const Embedding& e) {
  return static_cast<std::int64_t>(e.coords.size()) + e.spectrum.size();
}

/// E = V[, 1..d'] * diag(sqrt(lambda_1..d')). With d' = rank, pairwise
/// squared euclidean distances of the rows reproduce the input distances.
Embedding embed(const EigenSystem& eig, int d_prime);

/// Elbow rule: d' is the index with the largest consecutive drop of the
/// normalized eigenvalues, searched over [1, min(s-1, max_dim)] and
/// restricted to indices with lambda_i > 1e-6 * lambda_1. Ties break to the
/// smallest index.
int select_dimension(const EigenSystem& eig, int max_dim = 50);

/// index,normalized_eigenvalue,selected rows for external plotting.
void save_spectrum_csv(const Embedding& embedding, const std::string& path);

}  // namespace mmx
