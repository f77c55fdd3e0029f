#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmx/embedding.hpp"
#include "mmx/sampling.hpp"

namespace mmx {

// Predicted cluster assignment for a population of points (samples or objects).
struct ClusterLabels {
  std::vector<int> labels;  // each in [0, n_clusters)
  int n_clusters = 0;
};

// Gaussian mixture with diagonal covariances, fit by EM.
struct GmmModel {
  int n_components = 0;
  Eigen::VectorXd weights;               // length K, sums to 1
  Eigen::MatrixXd means;                 // K x d'
  Eigen::MatrixXd covariances;           // K x d', per-dimension variances
  double log_likelihood = 0.0;           // final training log-likelihood
  std::vector<double> log_likelihood_trace;  // one entry per EM iteration (best restart)
};

struct GmmFitResult {
  ClusterLabels labels;
  GmmModel model;
};

// Fits a diagonal-covariance Gaussian mixture to the embedded coordinates and
// returns argmax-responsibility labels together with the winning model.
// Each restart uses k-means++ initialization with its own RNG stream derived
// from (seed, restart index); the best restart by final log-likelihood wins.
GmmFitResult gmm_fit(const Embedding& embedding, int k, int restarts, std::uint64_t seed);

ClusterLabels gmm_fit_predict(const Embedding& embedding, int k, int restarts,
                              std::uint64_t seed);

// Lloyd's k-means on the embedded coordinates (k-means++ init, ties to the
// lowest centroid index).
ClusterLabels kmeans_fit_predict(const Embedding& embedding, int k, std::uint64_t seed);

// Propagates sample-level labels to every object through its subset assignment.
ClusterLabels extend_labels(const ClusterLabels& sample_labels, const SampleSet& samples);

// Writes one row per object: index, predicted label and, when known, the true label.
void save_labels_csv(const ClusterLabels& predicted, const std::vector<int>* truth,
                     const std::string& path);

}  // namespace mmx
