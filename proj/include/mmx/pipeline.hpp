#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmx/clustering.hpp"
#include "mmx/dataset.hpp"
#include "mmx/embedding.hpp"
#include "mmx/evaluation.hpp"
#include "mmx/memory.hpp"
#include "mmx/sampling.hpp"

namespace mmx {

// Everything one end-to-end run needs. `data` is a CSV path or a generator
// spec "gen:<name>:<n>" (e.g. gen:three_spirals:312).
struct RunConfig {
  std::string data;
  std::string sampler = "mm";  // mm | kmeans | dpp | random | none
  int k = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> label_column;
  bool standardize = false;
  int num_samples = 0;  // 0 -> ceil(sqrt(N))
  int max_dim = 50;
  int restarts = 10;
  std::string clusterer = "gmm";  // gmm | kmeans
  std::string out_dir;            // empty -> no artifacts written
  int dense_cap = 5000;           // guards sampler=none
  bool allow_dense = false;       // acknowledges a quadratic run above the cap
};

// Peak count of simultaneously-live entries across the tracked structures
// (Prim's vectors, the edge list, subset ids, M_s, kernel, eigensystem,
// embedding coordinates). For the mm sampler this is capped at 8N.
struct MemoryReport {
  std::int64_t peak_aux_entries = 0;
  std::int64_t n_objects = 0;
};

struct PipelineResult {
  std::optional<EvalScores> scores;  // present when ground truth is known
  MemoryReport memory;
  ClusterLabels labels;  // all N objects
  Embedding embedding;   // sample-level (full-scale for sampler=none)
  int n_samples = 0;     // s, or N for sampler=none
  double runtime_seconds = 0.0;
};

// Runs load -> minimax/sampling -> embedding -> clustering -> extension ->
// evaluation with one master seed fanned out per stage. Writes result.json,
// labels.csv, spectrum.csv and samples.json into out_dir when set. Any stage
// failure is rethrown with the stage name prefixed.
PipelineResult run_pipeline(const RunConfig& config);

// result.json payload; split out so determinism is testable byte-for-byte.
std::string result_to_json(const RunConfig& config, const PipelineResult& result);

// One row of the sweep table.
struct SweepRow {
  std::string data;
  std::string sampler;
  std::uint64_t seed = 0;
  int k = 0;
  int n_samples = 0;
  int d_prime = 0;
  std::optional<EvalScores> scores;
  std::int64_t peak_aux_entries = 0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

// Runs every cell of a sweep config (JSON: optional "defaults" object,
// "cells" array of run configs, optional "output_csv" path) and writes the
// aggregate CSV. A failing cell records its error and the sweep continues.
std::vector<SweepRow> run_sweep(const std::string& config_path);

void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace mmx
