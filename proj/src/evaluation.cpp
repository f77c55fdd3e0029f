#include "mmx/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace mmx {

namespace {

using std::int64_t;

struct Contingency {
  std::vector<std::vector<int64_t>> cells;  // rows: truth classes, cols: pred clusters
  std::vector<int64_t> row_sums;
  std::vector<int64_t> col_sums;
  int64_t n = 0;
};

Contingency build_contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::map<int, int> truth_index;
  std::map<int, int> pred_index;
  for (int t : truth) truth_index.emplace(t, 0);
  for (int p : pred) pred_index.emplace(p, 0);
  int next = 0;
  for (auto& [value, index] : truth_index) index = next++;
  next = 0;
  for (auto& [value, index] : pred_index) index = next++;

  Contingency table;
  table.n = static_cast<int64_t>(pred.size());
  table.cells.assign(truth_index.size(), std::vector<int64_t>(pred_index.size(), 0));
  table.row_sums.assign(truth_index.size(), 0);
  table.col_sums.assign(pred_index.size(), 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const int r = truth_index.at(truth[i]);
    const int c = pred_index.at(pred[i]);
    ++table.cells[r][c];
    ++table.row_sums[r];
    ++table.col_sums[c];
  }
  return table;
}

// True iff every row and every column holds exactly one nonzero cell, i.e. the
// two labelings agree up to renaming.
bool is_perfect_match(const Contingency& t) {
  std::vector<int> col_hits(t.col_sums.size(), 0);
  for (const auto& row : t.cells) {
    int row_hits = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] > 0) {
        ++row_hits;
        ++col_hits[c];
      }
    }
    if (row_hits != 1) return false;
  }
  return std::all_of(col_hits.begin(), col_hits.end(), [](int h) { return h == 1; });
}

int64_t pairs(int64_t m) { return m * (m - 1) / 2; }

double adjusted_rand(const Contingency& t) {
  int64_t together = 0;  // pairs placed together by both labelings
  for (const auto& row : t.cells) {
    for (int64_t cell : row) together += pairs(cell);
  }
  int64_t same_truth = 0;
  for (int64_t r : t.row_sums) same_truth += pairs(r);
  int64_t same_pred = 0;
  for (int64_t c : t.col_sums) same_pred += pairs(c);
  const double total = static_cast<double>(pairs(t.n));

  const double expected = static_cast<double>(same_truth) * static_cast<double>(same_pred) / total;
  const double maximum = 0.5 * static_cast<double>(same_truth + same_pred);
  if (maximum == expected) return 1.0;  // both labelings trivial
  return (static_cast<double>(together) - expected) / (maximum - expected);
}

double entropy(const std::vector<int64_t>& counts, int64_t n) {
  double h = 0.0;
  for (int64_t c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) / static_cast<double>(n);
      h -= p * std::log(p);
    }
  }
  return h;
}

double mutual_information(const Contingency& t) {
  double mi = 0.0;
  const double n = static_cast<double>(t.n);
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
      const int64_t cell = t.cells[r][c];
      if (cell == 0) continue;
      const double p = static_cast<double>(cell) / n;
      mi += p * std::log(n * static_cast<double>(cell) /
                         (static_cast<double>(t.row_sums[r]) *
                          static_cast<double>(t.col_sums[c])));
    }
  }
  return mi;
}

// Expectation of the mutual information over all contingency tables with the
// observed marginals (hypergeometric model), via log-gamma factorials.
double expected_mutual_information(const Contingency& t) {
  const int64_t n = t.n;
  const double log_n = std::log(static_cast<double>(n));
  const double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);
  double emi = 0.0;
  for (int64_t a : t.row_sums) {
    const double lg_a = std::lgamma(static_cast<double>(a) + 1.0);
    const double lg_na = std::lgamma(static_cast<double>(n - a) + 1.0);
    const double log_a = std::log(static_cast<double>(a));
    for (int64_t b : t.col_sums) {
      const double lg_b = std::lgamma(static_cast<double>(b) + 1.0);
      const double lg_nb = std::lgamma(static_cast<double>(n - b) + 1.0);
      const double log_b = std::log(static_cast<double>(b));
      const int64_t lo = std::max<int64_t>(1, a + b - n);
      const int64_t hi = std::min(a, b);
      for (int64_t nij = lo; nij <= hi; ++nij) {
        const double mass = static_cast<double>(nij) / static_cast<double>(n);
        const double info = std::log(static_cast<double>(nij)) + log_n - log_a - log_b;
        const double log_prob = lg_a + lg_b + lg_na + lg_nb - lg_n1 -
                                std::lgamma(static_cast<double>(nij) + 1.0) -
                                std::lgamma(static_cast<double>(a - nij) + 1.0) -
                                std::lgamma(static_cast<double>(b - nij) + 1.0) -
                                std::lgamma(static_cast<double>(n - a - b + nij) + 1.0);
        emi += mass * info * std::exp(log_prob);
      }
    }
  }
  return emi;
}

double adjusted_mutual_information(const Contingency& t) {
  if (t.row_sums.size() == 1 && t.col_sums.size() == 1) return 1.0;
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double normalizer = std::max(entropy(t.row_sums, t.n), entropy(t.col_sums, t.n));
  double denominator = normalizer - emi;
  // Keep the sign but avoid dividing by an exact zero.
  const double eps = std::numeric_limits<double>::epsilon();
  if (denominator >= 0.0) {
    denominator = std::max(denominator, eps);
  } else {
    denominator = std::min(denominator, -eps);
  }
  return (mi - emi) / denominator;
}

double v_measure(const Contingency& t) {
  const double h_truth = entropy(t.row_sums, t.n);
  const double h_pred = entropy(t.col_sums, t.n);
  const double n = static_cast<double>(t.n);

  double h_truth_given_pred = 0.0;  // H(truth | pred)
  double h_pred_given_truth = 0.0;  // H(pred | truth)
  for (std::size_t r = 0; r < t.cells.size(); ++r) {
    for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
      const int64_t cell = t.cells[r][c];
      if (cell == 0) continue;
      const double p = static_cast<double>(cell) / n;
      h_truth_given_pred -=
          p * std::log(static_cast<double>(cell) / static_cast<double>(t.col_sums[c]));
      h_pred_given_truth -=
          p * std::log(static_cast<double>(cell) / static_cast<double>(t.row_sums[r]));
    }
  }

  const double homogeneity = h_truth > 0.0 ? 1.0 - h_truth_given_pred / h_truth : 1.0;
  const double completeness = h_pred > 0.0 ? 1.0 - h_pred_given_truth / h_pred : 1.0;
  if (homogeneity + completeness == 0.0) return 0.0;
  return 2.0 * homogeneity * completeness / (homogeneity + completeness);
}

}  // namespace

EvalScores evaluate(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.empty()) throw std::invalid_argument("evaluate: empty label vectors");
  if (pred.size() != truth.size()) {
    throw std::invalid_argument("evaluate: got " + std::to_string(pred.size()) +
                                " predictions for " + std::to_string(truth.size()) +
                                " ground-truth labels");
  }

  const Contingency table = build_contingency(pred, truth);
  if (is_perfect_match(table)) return {1.0, 1.0, 1.0};

  EvalScores scores;
  scores.m1_rand = adjusted_rand(table);
  scores.m2_mutual_info = adjusted_mutual_information(table);
  scores.m3_v_measure = v_measure(table);
  return scores;
}

EvalScores evaluate(const ClusterLabels& pred, const ClusterLabels& truth) {
  return evaluate(pred.labels, truth.labels);
}

}  // namespace mmx
