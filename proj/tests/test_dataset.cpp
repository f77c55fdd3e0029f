#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "mmx/dataset.hpp"
#include "mmx/rng.hpp"
#include "oracles.hpp"

using namespace mmx;

namespace {

std::string write_temp_csv(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("load_csv parses a two-row file with a label column") {
  const auto path = write_temp_csv("two_row.csv", "x,y,lab\n0,0,a\n1,1,b\n");
  const DataMatrix data = load_csv(path, std::string("lab"));
  CHECK(data.n_objects() == 2);
  CHECK(data.n_features() == 2);
  REQUIRE(data.labels.has_value());
  CHECK(*data.labels == std::vector<int>{0, 1});
  CHECK(data.values(1, 0) == 1.0);
}

TEST_CASE("load_csv reads the iris measurements") {
  const std::string path = std::string(MMX_SOURCE_DIR) + "/data/iris.csv";
  const DataMatrix data = load_csv(path, std::string("species"));
  CHECK(data.n_objects() == 150);
  CHECK(data.n_features() == 4);
  CHECK(data.n_classes() == 3);
  // First row of the classic measurements.
  CHECK(data.values(0, 0) == doctest::Approx(5.1));
  CHECK(data.values(0, 1) == doctest::Approx(3.5));
}

TEST_CASE("load_csv reports the offending cell on a parse failure") {
  const auto path = write_temp_csv("bad_cell.csv", "x,y\n1,2\nabc,4\n");
  CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("abc"), std::runtime_error);
}

TEST_CASE("load_csv rejects ragged rows, unknown label columns, missing files") {
  const auto ragged = write_temp_csv("ragged.csv", "x,y\n1,2\n3\n");
  CHECK_THROWS_AS(load_csv(ragged), std::runtime_error);
  const auto fine = write_temp_csv("fine.csv", "x,y\n1,2\n");
  CHECK_THROWS_AS(load_csv(fine, std::string("nope")), std::runtime_error);
  CHECK_THROWS_AS(load_csv("/no/such/file.csv"), std::runtime_error);
}

TEST_CASE("dissimilarity is the squared euclidean distance") {
  DataMatrix data;
  data.values.resize(2, 2);
  data.values << 0.0, 0.0, 3.0, 4.0;
  CHECK(dissimilarity(data, 0, 1) == 25.0);  // 3-4-5 triangle
  CHECK(dissimilarity(data, 0, 0) == 0.0);
  CHECK(dissimilarity(data, 1, 1) == 0.0);
  CHECK_THROWS_AS(dissimilarity(data, 0, 2), std::out_of_range);
}

TEST_CASE("dissimilarity matches a per-coordinate summation oracle") {
  const DataMatrix data = oracles::random_points(5, 3, 11);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(dissimilarity(data, i, j) ==
            doctest::Approx(oracles::squared_euclidean_naive(data, i, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dissimilarity is symmetric, non-negative, zero on the diagonal") {
  const DataMatrix data = oracles::random_points(60, 4, 23);
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int i = rng.next_int(60);
    const int j = rng.next_int(60);
    const double fij = dissimilarity(data, i, j);
    CHECK(fij >= 0.0);
    CHECK(fij == dissimilarity(data, j, i));
  }
  for (int i = 0; i < 60; ++i) CHECK(dissimilarity(data, i, i) == 0.0);
}

TEST_CASE("two_blobs is deterministic for a fixed seed") {
  const DataMatrix a = generate_synthetic(SyntheticName::two_blobs, 10, 7);
  const DataMatrix b = generate_synthetic(SyntheticName::two_blobs, 10, 7);
  CHECK(a.values == b.values);
  CHECK(*a.labels == *b.labels);
}

TEST_CASE("three_spirals produces three arms of at least 100 points at n=312") {
  const DataMatrix data = generate_synthetic(SyntheticName::three_spirals, 312, 3);
  CHECK(data.n_objects() == 312);
  REQUIRE(data.labels.has_value());
  CHECK(data.n_classes() == 3);
  int counts[3] = {0, 0, 0};
  for (int label : *data.labels) ++counts[label];
  for (int arm = 0; arm < 3; ++arm) CHECK(counts[arm] >= 100);
}

TEST_CASE("two_blobs separates under single linkage") {
  const DataMatrix data = generate_synthetic(SyntheticName::two_blobs, 40, 99);
  const std::vector<int> cut = oracles::single_linkage_cut(data, 2);
  // Same partition as the ground truth, up to label names.
  std::set<std::pair<int, int>> mapping;
  for (int i = 0; i < 40; ++i) mapping.insert({(*data.labels)[i], cut[i]});
  CHECK(mapping.size() == 2);
}

TEST_CASE("generator names parse and bad ones are rejected") {
  CHECK(parse_synthetic_name("two_blobs") == SyntheticName::two_blobs);
  CHECK(parse_synthetic_name("three_spirals") == SyntheticName::three_spirals);
  CHECK_THROWS_AS(parse_synthetic_name("four_moons"), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(SyntheticName::three_spirals, 5, 1),
                  std::invalid_argument);
}

TEST_CASE("save_csv and load_csv round-trip within 1e-12") {
  DataMatrix data = oracles::random_points(12, 3, 31);
  data.labels = std::vector<int>(12);
  for (int i = 0; i < 12; ++i) (*data.labels)[i] = i % 3;
  const auto path =
      (std::filesystem::temp_directory_path() / "roundtrip.csv").string();
  save_csv(data, path, "cls");
  const DataMatrix back = load_csv(path, std::string("cls"));
  REQUIRE(back.n_objects() == data.n_objects());
  REQUIRE(back.n_features() == data.n_features());
  for (int i = 0; i < 12; ++i) {
    for (int c = 0; c < 3; ++c) {
      CHECK(back.values(i, c) == doctest::Approx(data.values(i, c)).epsilon(1e-12));
    }
  }
  CHECK(*back.labels == *data.labels);
}

TEST_CASE("standardize z-scores columns and leaves constant columns alone") {
  DataMatrix data;
  data.values.resize(4, 2);
  data.values << 1.0, 7.0, 2.0, 7.0, 3.0, 7.0, 4.0, 7.0;
  standardize(data);
  CHECK(data.values.col(0).mean() == doctest::Approx(0.0).epsilon(1e-12));
  const double var = (data.values.col(0).array() -
                      data.values.col(0).mean()).square().sum() / 4.0;
  CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) CHECK(data.values(i, 1) == 7.0);
}
