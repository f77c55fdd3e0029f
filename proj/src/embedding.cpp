#include "mmx/embedding.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace mmx {

Eigen::MatrixXd to_mercer_kernel(const MinimaxMatrix& m) {
  const int s = m.size();
  const Eigen::MatrixXd& d = m.entries();
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      if (d(i, j) < 0.0) {
        throw std::invalid_argument("to_mercer_kernel: negative entry at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (d(i, j) != d(j, i)) {
        throw std::invalid_argument("to_mercer_kernel: input is not symmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  const Eigen::VectorXd row_mean = d.rowwise().mean();
  const double grand_mean = d.mean();
  Eigen::MatrixXd k(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      k(i, j) = -0.5 * (d(i, j) - row_mean(i) - row_mean(j) + grand_mean);
    }
  }
  return k;
}

EigenSystem eigendecompose(const Eigen::MatrixXd& k) {
  if (k.rows() != k.cols()) throw std::invalid_argument("eigendecompose: matrix must be square");
  const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    throw std::invalid_argument("eigendecompose: matrix asymmetric by " + std::to_string(asym));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: iteration did not converge");
  }

  const int s = static_cast<int>(k.rows());
  EigenSystem eig;
  eig.eigenvalues.resize(s);
  eig.eigenvectors.resize(s, s);
  // Eigen returns ascending order; flip to descending.
  for (int i = 0; i < s; ++i) {
    eig.eigenvalues[i] = solver.eigenvalues()[s - 1 - i];
    eig.eigenvectors.col(i) = solver.eigenvectors().col(s - 1 - i);
  }
  // Deterministic sign: the largest-magnitude component of each eigenvector
  // is made positive (first occurrence wins on magnitude ties).
  for (int c = 0; c < s; ++c) {
    int arg = 0;
    double best = std::abs(eig.eigenvectors(0, c));
    for (int r = 1; r < s; ++r) {
      const double a = std::abs(eig.eigenvectors(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (eig.eigenvectors(arg, c) < 0.0) eig.eigenvectors.col(c) = -eig.eigenvectors.col(c);
  }
  return eig;
}

int clip_spectrum(EigenSystem& eig, double rel_tol) {
  if (eig.eigenvalues.size() == 0) return 0;
  const double lambda_max = eig.eigenvalues[0];
  const double tol = lambda_max > 0.0 ? rel_tol * lambda_max : 0.0;
  int below = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i] < 0.0) {
      if (eig.eigenvalues[i] < -tol) ++below;
      eig.eigenvalues[i] = 0.0;
    }
  }
  return below;
}

Embedding embed(const EigenSystem& eig, int d_prime) {
  const int s = static_cast<int>(eig.eigenvalues.size());
  if (d_prime < 1 || d_prime > s) {
    throw std::invalid_argument("embed: d' must be in [1, " + std::to_string(s) + "], got " +
                                std::to_string(d_prime));
  }
  for (int i = 0; i < d_prime; ++i) {
    if (eig.eigenvalues[i] < 0.0) {
      throw std::invalid_argument("embed: negative eigenvalue " +
                                  std::to_string(eig.eigenvalues[i]) + " at index " +
                                  std::to_string(i) + "; clip the spectrum first");
    }
  }

  Embedding out;
  out.d_prime = d_prime;
  out.coords.resize(s, d_prime);
  for (int c = 0; c < d_prime; ++c) {
    out.coords.col(c) = eig.eigenvectors.col(c) * std::sqrt(eig.eigenvalues[c]);
  }
  const double lambda_max = eig.eigenvalues.size() > 0 ? eig.eigenvalues[0] : 0.0;
  out.spectrum = lambda_max > 0.0 ? (eig.eigenvalues / lambda_max).eval() : eig.eigenvalues;
  return out;
}

int select_dimension(const EigenSystem& eig, int max_dim) {
  const int s = static_cast<int>(eig.eigenvalues.size());
  if (s == 0 || eig.eigenvalues[0] <= 0.0) {
    throw std::invalid_argument("select_dimension: no positive eigenvalue");
  }
  if (s == 1) return 1;

  const double lambda1 = eig.eigenvalues[0];
  const int hi = std::min(s - 1, max_dim);
  int best_index = 1;
  double best_drop = -1.0;
  for (int i = 1; i <= hi; ++i) {
    const double value = eig.eigenvalues[i - 1] / lambda1;
    if (value <= 1e-6) continue;
    const double drop = (eig.eigenvalues[i - 1] - eig.eigenvalues[i]) / lambda1;
    if (drop > best_drop) {
      best_drop = drop;
      best_index = i;
    }
  }
  return best_index;
}

void save_spectrum_csv(const Embedding& embedding, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_spectrum_csv: cannot open '" + path + "'");
  out.precision(17);
  out << "index,normalized_eigenvalue,selected\n";
  for (Eigen::Index i = 0; i < embedding.spectrum.size(); ++i) {
    out << (i + 1) << ',' << embedding.spectrum[i] << ','
        << (i < embedding.d_prime ? 1 : 0) << '\n';
  }
}

}  // namespace mmx
