#include "mmx/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "mmx/kmeans.hpp"
#include "mmx/rng.hpp"

namespace mmx {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

// log N(x | mu, diag(var)) for one point and one component.
double log_gaussian_diag(const Eigen::MatrixXd& x, int i, const Eigen::MatrixXd& means,
                         const Eigen::MatrixXd& vars, int k) {
  const int d = static_cast<int>(x.cols());
  double acc = 0.0;
  for (int c = 0; c < d; ++c) {
    const double diff = x(i, c) - means(k, c);
    acc += std::log(vars(k, c)) + diff * diff / vars(k, c);
  }
  return -0.5 * (d * kLogTwoPi + acc);
}

struct EmOutcome {
  Eigen::VectorXd weights;
  Eigen::MatrixXd means;
  Eigen::MatrixXd vars;
  std::vector<double> trace;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  std::vector<int> labels;
};

// One EM run from a k-means++ initialization. var_floor > 0 is required.
EmOutcome run_em(const Eigen::MatrixXd& x, int k, double var_floor, Rng& rng) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());

  EmOutcome out;
  const RowMatrixXd points = x;
  const std::vector<int> seeds = kmeans_pp_init(points, k, rng);
  out.means.resize(k, d);
  for (int c = 0; c < k; ++c) out.means.row(c) = x.row(seeds[c]);
  out.weights = Eigen::VectorXd::Constant(k, 1.0 / k);
  Eigen::RowVectorXd overall_var(d);
  const Eigen::RowVectorXd col_mean = x.colwise().mean();
  for (int c = 0; c < d; ++c) {
    overall_var(c) = std::max((x.col(c).array() - col_mean(c)).square().mean(), var_floor);
  }
  out.vars = overall_var.replicate(k, 1);

  Eigen::MatrixXd log_resp(n, k);
  Eigen::MatrixXd resp(n, k);
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < 200; ++iter) {
    // E-step in the log domain: log_resp(i,k) = log w_k + log N_k(x_i) - logsumexp.
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      double row_max = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double lw = out.weights(c) > 0.0 ? std::log(out.weights(c))
                                               : -std::numeric_limits<double>::infinity();
        log_resp(i, c) = lw + log_gaussian_diag(x, i, out.means, out.vars, c);
        row_max = std::max(row_max, log_resp(i, c));
      }
      double sum = 0.0;
      for (int c = 0; c < k; ++c) sum += std::exp(log_resp(i, c) - row_max);
      const double lse = row_max + std::log(sum);
      ll += lse;
      double check = 0.0;
      for (int c = 0; c < k; ++c) {
        resp(i, c) = std::exp(log_resp(i, c) - lse);
        check += resp(i, c);
      }
      if (std::abs(check - 1.0) > 1e-10) {
        throw std::runtime_error("gmm_fit: responsibility row does not sum to 1");
      }
    }
    out.trace.push_back(ll);

    const bool converged =
        std::isfinite(prev_ll) && std::abs(ll - prev_ll) < 1e-7 * std::abs(prev_ll);
    prev_ll = ll;
    if (converged) break;

    // M-step. A component with no effective mass keeps its parameters and gets
    // weight zero, which leaves the likelihood of the remaining mixture intact.
    for (int c = 0; c < k; ++c) {
      const double nk = resp.col(c).sum();
      if (nk < 1e-12) {
        out.weights(c) = 0.0;
        continue;
      }
      out.weights(c) = nk / n;
      for (int dim = 0; dim < d; ++dim) {
        double mu = 0.0;
        for (int i = 0; i < n; ++i) mu += resp(i, c) * x(i, dim);
        mu /= nk;
        double var = 0.0;
        for (int i = 0; i < n; ++i) {
          const double diff = x(i, dim) - mu;
          var += resp(i, c) * diff * diff;
        }
        out.means(c, dim) = mu;
        out.vars(c, dim) = std::max(var / nk, var_floor);
      }
    }
  }

  out.log_likelihood = prev_ll;
  out.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int c = 1; c < k; ++c) {
      if (resp(i, c) > resp(i, best)) best = c;
    }
    out.labels[i] = best;
  }
  return out;
}

}  // namespace

GmmFitResult gmm_fit(const Embedding& embedding, int k, int restarts, std::uint64_t seed) {
  const Eigen::MatrixXd& x = embedding.coords;
  const int s = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (k < 1) throw std::invalid_argument("gmm_fit: k must be >= 1, got " + std::to_string(k));
  if (k > s) {
    throw std::invalid_argument("gmm_fit: k=" + std::to_string(k) + " exceeds sample count " +
                                std::to_string(s));
  }
  if (restarts < 1) throw std::invalid_argument("gmm_fit: restarts must be >= 1");

  // Regularization floor from the mean per-dimension variance of the data.
  const Eigen::RowVectorXd col_mean = x.colwise().mean();
  double mean_var = 0.0;
  for (int c = 0; c < d; ++c) {
    mean_var += (x.col(c).array() - col_mean(c)).square().mean();
  }
  mean_var /= d;

  GmmFitResult result;
  if (mean_var == 0.0) {
    // All points identical: every component would collapse onto the same point.
    std::cerr << "warning: gmm_fit: all points identical; returning a single cluster\n";
    result.labels.labels.assign(s, 0);
    result.labels.n_clusters = 1;
    result.model.n_components = 1;
    result.model.weights = Eigen::VectorXd::Ones(1);
    result.model.means = x.row(0);
    result.model.covariances = Eigen::MatrixXd::Constant(1, d, 1e-12);
    return result;
  }
  const double var_floor = 1e-6 * mean_var;

  EmOutcome best;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    EmOutcome run = run_em(x, k, var_floor, rng);
    if (run.log_likelihood > best.log_likelihood) best = std::move(run);
  }

  result.labels.labels = best.labels;
  result.labels.n_clusters = k;
  result.model.n_components = k;
  result.model.weights = best.weights;
  result.model.means = best.means;
  result.model.covariances = best.vars;
  result.model.log_likelihood = best.log_likelihood;
  result.model.log_likelihood_trace = best.trace;
  return result;
}

ClusterLabels gmm_fit_predict(const Embedding& embedding, int k, int restarts,
                              std::uint64_t seed) {
  return gmm_fit(embedding, k, restarts, seed).labels;
}

ClusterLabels kmeans_fit_predict(const Embedding& embedding, int k, std::uint64_t seed) {
  const int s = static_cast<int>(embedding.coords.rows());
  if (k < 1 || k > s) {
    throw std::invalid_argument("kmeans_fit_predict: k must be in [1, " + std::to_string(s) +
                                "], got " + std::to_string(k));
  }
  Rng rng(seed);
  const RowMatrixXd points = embedding.coords;
  KMeansResult km = kmeans(points, k, rng);
  ClusterLabels out;
  out.labels = std::move(km.labels);
  out.n_clusters = k;
  return out;
}

ClusterLabels extend_labels(const ClusterLabels& sample_labels, const SampleSet& samples) {
  if (static_cast<int>(sample_labels.labels.size()) != samples.s) {
    throw std::invalid_argument("extend_labels: got " +
                                std::to_string(sample_labels.labels.size()) +
                                " sample labels for " + std::to_string(samples.s) + " samples");
  }
  ClusterLabels out;
  out.n_clusters = sample_labels.n_clusters;
  out.labels.resize(samples.assignment.subset_id.size());
  for (std::size_t i = 0; i < samples.assignment.subset_id.size(); ++i) {
    out.labels[i] = sample_labels.labels[samples.assignment.subset_id[i]];
  }
  return out;
}

void save_labels_csv(const ClusterLabels& predicted, const std::vector<int>* truth,
                     const std::string& path) {
  if (truth != nullptr && truth->size() != predicted.labels.size()) {
    throw std::invalid_argument("save_labels_csv: truth length does not match predictions");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_labels_csv: cannot open '" + path + "'");
  out << (truth != nullptr ? "index,predicted,truth\n" : "index,predicted\n");
  for (std::size_t i = 0; i < predicted.labels.size(); ++i) {
    out << i << ',' << predicted.labels[i];
    if (truth != nullptr) out << ',' << (*truth)[i];
    out << '\n';
  }
}

}  // namespace mmx
