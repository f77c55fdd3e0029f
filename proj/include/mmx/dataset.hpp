#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mmx {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N objects by D features, with optional ground-truth cluster ids.
/// Read-only after construction; safe to share across threads.
struct DataMatrix {
  RowMatrixXd values;                        // N x D, finite reals
  std::optional<std::vector<int>> labels;    // length N when present

  Eigen::Index n_objects() const { return values.rows(); }
  Eigen::Index n_features() const { return values.cols(); }

  /// Number of distinct ground-truth labels (0 when labels are absent).
  int n_classes() const;
};

enum class DissimilarityKind { squared_euclidean };

/// Base pairwise dissimilarity f. Zero self-dissimilarity, symmetric,
/// non-negative; no metric axioms beyond those are assumed anywhere.
class Dissimilarity {
 public:
  explicit Dissimilarity(DissimilarityKind kind = DissimilarityKind::squared_euclidean)
      : kind_(kind) {}

  DissimilarityKind kind() const { return kind_; }

  /// f(i, j) on the given dataset. Throws std::out_of_range on bad indices.
  double operator()(const DataMatrix& data, Eigen::Index i, Eigen::Index j) const;

 private:
  DissimilarityKind kind_;
};

/// Convenience wrapper for the common case.
double dissimilarity(const DataMatrix& data, Eigen::Index i, Eigen::Index j);

/// Parses a comma-separated file (UTF-8, first row header, decimal-point
/// reals). When label_column names a header, that column is factor-encoded
/// to 0..K-1 in first-appearance order and removed from the features.
/// Parse failures report the offending row and column.
DataMatrix load_csv(const std::string& path,
                    const std::optional<std::string>& label_column = std::nullopt);

/// Writes features (and the label column when present) back to CSV with
/// round-trip precision.
void save_csv(const DataMatrix& data, const std::string& path,
              const std::string& label_column = "label");

enum class SyntheticName { two_blobs, three_spirals };

SyntheticName parse_synthetic_name(const std::string& name);

/// Deterministic generators with ground-truth labels. two_blobs: two
/// Gaussian clouds 20 apart with unit noise. three_spirals: interleaved
/// Archimedean arms sampled evenly by arc length.
DataMatrix generate_synthetic(SyntheticName name, int n, std::uint64_t seed);
DataMatrix generate_synthetic(const std::string& name, int n, std::uint64_t seed);

/// Z-scores each feature column in place (columns with zero spread are left).
void standardize(DataMatrix& data);

}  // namespace mmx
