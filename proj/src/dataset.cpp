#include "mmx/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mmx/rng.hpp"

namespace mmx {

int DataMatrix::n_classes() const {
  if (!labels) return 0;
  std::set<int> distinct(labels->begin(), labels->end());
  return static_cast<int>(distinct.size());
}

double Dissimilarity::operator()(const DataMatrix& data, Eigen::Index i,
                                 Eigen::Index j) const {
  const Eigen::Index n = data.n_objects();
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw std::out_of_range("dissimilarity: object index out of range (i=" +
                            std::to_string(i) + ", j=" + std::to_string(j) +
                            ", N=" + std::to_string(n) + ")");
  }
  switch (kind_) {
    case DissimilarityKind::squared_euclidean:
      return (data.values.row(i) - data.values.row(j)).squaredNorm();
  }
  throw std::logic_error("dissimilarity: unknown kind");
}

double dissimilarity(const DataMatrix& data, Eigen::Index i, Eigen::Index j) {
  return Dissimilarity{}(data, i, j);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col_name) {
  const std::string text = strip(raw);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw std::runtime_error("load_csv: cannot parse '" + text + "' as a finite number at row " +
                             std::to_string(row) + ", column '" + col_name + "'");
  }
  return value;
}

}  // namespace

DataMatrix load_csv(const std::string& path, const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file '" + path + "'");
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = strip(h);
  if (header.empty()) throw std::runtime_error("load_csv: empty header in '" + path + "'");

  int label_idx = -1;
  if (label_column) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == *label_column) {
        label_idx = static_cast<int>(c);
        break;
      }
    }
    if (label_idx < 0) {
      throw std::runtime_error("load_csv: label column '" + *label_column + "' not found in '" +
                               path + "'");
    }
  }

  const std::size_t width = header.size();
  const std::size_t n_feat = label_idx >= 0 ? width - 1 : width;
  if (n_feat == 0) throw std::runtime_error("load_csv: no feature columns in '" + path + "'");

  std::vector<double> flat;
  std::vector<int> labels;
  std::unordered_map<std::string, int> label_codes;  // first-appearance order
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (strip(line).empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != width) {
      throw std::runtime_error("load_csv: row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<int>(c) == label_idx) {
        const std::string key = strip(cells[c]);
        auto [it, inserted] = label_codes.try_emplace(key, static_cast<int>(label_codes.size()));
        labels.push_back(it->second);
      } else {
        flat.push_back(parse_cell(cells[c], row, header[c]));
      }
    }
  }
  if (flat.empty()) throw std::runtime_error("load_csv: no data rows in '" + path + "'");

  const Eigen::Index n = static_cast<Eigen::Index>(flat.size() / n_feat);
  DataMatrix data;
  data.values = Eigen::Map<RowMatrixXd>(flat.data(), n, static_cast<Eigen::Index>(n_feat));
  if (label_idx >= 0) data.labels = std::move(labels);
  return data;
}

void save_csv(const DataMatrix& data, const std::string& path, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot open '" + path + "' for writing");
  out.precision(17);
  for (Eigen::Index c = 0; c < data.n_features(); ++c) {
    if (c) out << ',';
    out << 'x' << c;
  }
  if (data.labels) out << ',' << label_column;
  out << '\n';
  for (Eigen::Index r = 0; r < data.n_objects(); ++r) {
    for (Eigen::Index c = 0; c < data.n_features(); ++c) {
      if (c) out << ',';
      out << data.values(r, c);
    }
    if (data.labels) out << ',' << (*data.labels)[r];
    out << '\n';
  }
}

SyntheticName parse_synthetic_name(const std::string& name) {
  if (name == "two_blobs") return SyntheticName::two_blobs;
  if (name == "three_spirals") return SyntheticName::three_spirals;
  throw std::invalid_argument("generate_synthetic: unknown generator '" + name + "'");
}

namespace {

DataMatrix make_two_blobs(int n, std::uint64_t seed) {
  Rng rng(seed);
  DataMatrix data;
  data.values.resize(n, 2);
  std::vector<int> labels(n);
  const int n0 = n / 2;
  for (int i = 0; i < n; ++i) {
    const int blob = i < n0 ? 0 : 1;
    const double cx = blob == 0 ? 0.0 : 20.0;
    data.values(i, 0) = cx + rng.next_gaussian();
    data.values(i, 1) = rng.next_gaussian();
    labels[i] = blob;
  }
  data.labels = std::move(labels);
  return data;
}

// Arc length of r = theta from 0 to theta (unit growth rate).
double spiral_arc(double theta) {
  return 0.5 * (theta * std::sqrt(theta * theta + 1.0) + std::asinh(theta));
}

double spiral_theta_at_arc(double s, double lo, double hi) {
  // bisection; spiral_arc is strictly increasing
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (spiral_arc(mid) < s)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Three interleaved Archimedean arms (r = theta, offsets 2*pi/3), points
// evenly spaced by arc length so along-arm gaps stay well below the
// strand-to-strand separation of ~2*pi/3.
DataMatrix make_three_spirals(int n, std::uint64_t seed) {
  Rng rng(seed);
  const double theta0 = 1.5;
  const double theta1 = 11.0;
  const double noise = 0.05;
  const double two_pi = 6.283185307179586;

  DataMatrix data;
  data.values.resize(n, 2);
  std::vector<int> labels(n);
  int written = 0;
  for (int arm = 0; arm < 3; ++arm) {
    const int m = n / 3 + (arm < n % 3 ? 1 : 0);
    const double phase = two_pi * arm / 3.0;
    const double s0 = spiral_arc(theta0);
    const double s1 = spiral_arc(theta1);
    for (int i = 0; i < m; ++i) {
      const double target = s0 + (s1 - s0) * (i + 0.5) / m;
      const double theta = spiral_theta_at_arc(target, theta0, theta1);
      const double r = theta;
      data.values(written, 0) = r * std::cos(theta + phase) + noise * rng.next_gaussian();
      data.values(written, 1) = r * std::sin(theta + phase) + noise * rng.next_gaussian();
      labels[written] = arm;
      ++written;
    }
  }
  data.labels = std::move(labels);
  return data;
}

}  // namespace

DataMatrix generate_synthetic(SyntheticName name, int n, std::uint64_t seed) {
  const int clusters = name == SyntheticName::two_blobs ? 2 : 3;
  if (n < 3 * clusters) {
    throw std::invalid_argument("generate_synthetic: n=" + std::to_string(n) +
                                " too small (need at least " + std::to_string(3 * clusters) + ")");
  }
  switch (name) {
    case SyntheticName::two_blobs:
      return make_two_blobs(n, seed);
    case SyntheticName::three_spirals:
      return make_three_spirals(n, seed);
  }
  throw std::logic_error("generate_synthetic: unreachable");
}

DataMatrix generate_synthetic(const std::string& name, int n, std::uint64_t seed) {
  return generate_synthetic(parse_synthetic_name(name), n, seed);
}

void standardize(DataMatrix& data) {
  const Eigen::Index n = data.n_objects();
  if (n < 2) return;
  for (Eigen::Index c = 0; c < data.n_features(); ++c) {
    const double mean = data.values.col(c).mean();
    const double var = (data.values.col(c).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      data.values.col(c) = (data.values.col(c).array() - mean) / sd;
    }
  }
}

}  // namespace mmx
