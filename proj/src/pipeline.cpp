#include "mmx/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "mmx/minimax.hpp"
#include "mmx/rng.hpp"

namespace mmx {

namespace {

// Per-stage RNG streams derived from the master seed.
enum SeedStream : std::uint64_t {
  kPrimStream = 0,
  kSamplerStream = 1,
  kClusterStream = 2,
  kGeneratorStream = 3,
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

DataMatrix load_stage(const RunConfig& config) {
  if (config.data.rfind("gen:", 0) == 0) {
    // gen:<name>:<n>
    const std::string spec = config.data.substr(4);
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("generator spec must be gen:<name>:<n>, got '" +
                                  config.data + "'");
    }
    const std::string name = spec.substr(0, colon);
    int n = 0;
    try {
      n = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("generator spec has a non-numeric size: '" + config.data +
                                  "'");
    }
    return generate_synthetic(name, n, derive_seed(config.seed, kGeneratorStream));
  }
  return load_csv(config.data, config.label_column);
}

ClusterLabels cluster_stage(const RunConfig& config, const Embedding& embedding) {
  const std::uint64_t seed = derive_seed(config.seed, kClusterStream);
  if (config.clusterer == "gmm") {
    return gmm_fit_predict(embedding, config.k, config.restarts, seed);
  }
  if (config.clusterer == "kmeans") {
    return kmeans_fit_predict(embedding, config.k, seed);
  }
  throw std::invalid_argument("unknown clusterer '" + config.clusterer +
                              "' (expected gmm or kmeans)");
}

// Kernel -> spectrum -> dimension -> coordinates, with meter bookkeeping.
Embedding embed_stage(const MinimaxMatrix& ms, int max_dim, MemoryMeter& meter) {
  const std::int64_t s = ms.size();
  const Eigen::MatrixXd kernel = to_mercer_kernel(ms);
  meter.acquire(s * s, "kernel");
  EigenSystem eig = eigendecompose(kernel);
  meter.acquire(s * s + s, "eigensystem");
  const int clipped = clip_spectrum(eig);
  if (clipped > 0) {
    std::fprintf(stderr,
                 "warning: %d kernel eigenvalue(s) fell below the negative tolerance; "
                 "the distance matrix is not exactly embeddable\n",
                 clipped);
  }
  const int d_prime = select_dimension(eig, max_dim);
  Embedding embedding = embed(eig, d_prime);
  meter.acquire(tracked_entries(embedding), "embedding");
  meter.release(s * s);      // kernel
  meter.release(s * s + s);  // eigensystem
  return embedding;
}

void write_artifacts(const RunConfig& config, const PipelineResult& result,
                     const std::vector<int>* truth, const SampleSet* samples) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const fs::path dir(config.out_dir);

  std::ofstream json_out(dir / "result.json");
  if (!json_out) {
    throw std::runtime_error("cannot open '" + (dir / "result.json").string() + "'");
  }
  json_out << result_to_json(config, result) << '\n';

  save_labels_csv(result.labels, truth, (dir / "labels.csv").string());
  save_spectrum_csv(result.embedding, (dir / "spectrum.csv").string());

  if (samples != nullptr) {
    save_sample_set(*samples, (dir / "samples.json").string());
  } else {
    // sampler=none has no sample set; record that explicitly.
    std::ofstream samples_out(dir / "samples.json");
    nlohmann::ordered_json none;
    none["method"] = "none";
    none["n_objects"] = result.memory.n_objects;
    samples_out << none.dump(2) << '\n';
  }
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();

  DataMatrix data = stage("load", [&] { return load_stage(config); });
  if (config.standardize) standardize(data);
  const std::int64_t n = data.n_objects();
  const Dissimilarity f;

  MemoryMeter meter;
  PipelineResult result;
  result.memory.n_objects = n;

  std::optional<SampleSet> samples;

  if (config.sampler == "none") {
    if (n > config.dense_cap && !config.allow_dense) {
      throw std::invalid_argument(
          "sampler=none materializes the full N x N matrix; N=" + std::to_string(n) +
          " exceeds the dense cap " + std::to_string(config.dense_cap) +
          " (pass --allow-dense to run anyway)");
    }
    const int cap = config.allow_dense ? static_cast<int>(n) : config.dense_cap;
    MinimaxMatrix m = stage("minimax", [&] {
      MstEdgeList mst = prim_incremental(data, f, derive_seed(config.seed, kPrimStream), &meter);
      MinimaxMatrix full = minimax_from_mst(mst, cap, &meter);
      meter.release(tracked_entries(mst));
      return full;
    });
    result.n_samples = static_cast<int>(n);
    result.embedding = stage("embedding", [&] {
      Embedding e = embed_stage(m, config.max_dim, meter);
      meter.release(tracked_entries(m));
      return e;
    });
    result.labels = stage("clustering", [&] { return cluster_stage(config, result.embedding); });
  } else {
    const SamplerMethod method = parse_sampler_method(config.sampler);
    MinimaxMatrix ms;
    if (method == SamplerMethod::mm) {
      // The linear-memory path: everything tracked, hard budget 8N.
      meter.set_limit(8 * n);
      MmSampleResult mm = stage("sampling", [&] {
        MstEdgeList mst =
            prim_incremental(data, f, derive_seed(config.seed, kPrimStream), &meter);
        MmSampleResult r = mm_sample(mst, config.num_samples, &meter);
        meter.release(tracked_entries(mst));
        return r;
      });
      samples = std::move(mm.samples);
      ms = std::move(mm.sample_minimax);
    } else {
      const std::uint64_t sampler_seed = derive_seed(config.seed, kSamplerStream);
      samples = stage("sampling", [&] {
        switch (method) {
          case SamplerMethod::kmeans:
            return kmeans_sample(data, f, sampler_seed, config.num_samples);
          case SamplerMethod::dpp:
            return dpp_sample(data, f, sampler_seed, config.num_samples);
          case SamplerMethod::random:
            return random_sample(data, f, sampler_seed, config.num_samples);
          default:
            throw std::logic_error("unreachable sampler branch");
        }
      });
      meter.acquire(tracked_entries(samples->assignment), "subset ids");
      ms = stage("sample minimax", [&] { return sample_minimax(*samples, f, &meter); });
    }

    result.n_samples = samples->s;
    result.embedding = stage("embedding", [&] {
      Embedding e = embed_stage(ms, config.max_dim, meter);
      meter.release(tracked_entries(ms));
      return e;
    });
    const ClusterLabels sample_labels =
        stage("clustering", [&] { return cluster_stage(config, result.embedding); });
    result.labels = stage("extension", [&] { return extend_labels(sample_labels, *samples); });
    meter.release(tracked_entries(result.embedding));
    meter.release(tracked_entries(samples->assignment));
  }

  if (data.labels.has_value()) {
    result.scores = stage("evaluation", [&] { return evaluate(result.labels.labels, *data.labels); });
  }

  result.memory.peak_aux_entries = meter.peak();
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!config.out_dir.empty()) {
    stage("artifacts", [&] {
      write_artifacts(config, result, data.labels ? &*data.labels : nullptr,
                      samples ? &*samples : nullptr);
      return 0;
    });
  }
  return result;
}

std::string result_to_json(const RunConfig& config, const PipelineResult& result) {
  nlohmann::ordered_json j;
  j["dataset"] = config.data;
  j["sampler"] = config.sampler;
  j["seed"] = config.seed;
  j["k"] = config.k;
  j["clusterer"] = config.clusterer;
  j["standardize"] = config.standardize;
  j["restarts"] = config.restarts;
  j["max_dim"] = config.max_dim;
  j["num_samples"] = result.n_samples;
  j["d_prime"] = result.embedding.d_prime;
  if (result.scores.has_value()) {
    j["m1"] = result.scores->m1_rand;
    j["m2"] = result.scores->m2_mutual_info;
    j["m3"] = result.scores->m3_v_measure;
  } else {
    j["m1"] = nullptr;
    j["m2"] = nullptr;
    j["m3"] = nullptr;
  }
  j["peak_aux_entries"] = result.memory.peak_aux_entries;
  j["n_objects"] = result.memory.n_objects;
  return j.dump(2);
}

std::vector<SweepRow> run_sweep(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open sweep config '" + config_path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("sweep config '" + config_path + "' is not valid JSON: " +
                             e.what());
  }

  auto apply = [](RunConfig& config, const nlohmann::json& obj) {
    if (obj.contains("data")) config.data = obj.at("data").get<std::string>();
    if (obj.contains("sampler")) config.sampler = obj.at("sampler").get<std::string>();
    if (obj.contains("k")) config.k = obj.at("k").get<int>();
    if (obj.contains("seed")) config.seed = obj.at("seed").get<std::uint64_t>();
    if (obj.contains("label_col")) config.label_column = obj.at("label_col").get<std::string>();
    if (obj.contains("standardize")) config.standardize = obj.at("standardize").get<bool>();
    if (obj.contains("num_samples")) config.num_samples = obj.at("num_samples").get<int>();
    if (obj.contains("max_dim")) config.max_dim = obj.at("max_dim").get<int>();
    if (obj.contains("restarts")) config.restarts = obj.at("restarts").get<int>();
    if (obj.contains("clusterer")) config.clusterer = obj.at("clusterer").get<std::string>();
    if (obj.contains("out")) config.out_dir = obj.at("out").get<std::string>();
    if (obj.contains("allow_dense")) config.allow_dense = obj.at("allow_dense").get<bool>();
  };

  RunConfig defaults;
  if (doc.contains("defaults")) apply(defaults, doc.at("defaults"));

  std::vector<SweepRow> rows;
  for (const auto& cell : doc.value("cells", nlohmann::json::array())) {
    RunConfig config = defaults;
    apply(config, cell);

    SweepRow row;
    row.data = config.data;
    row.sampler = config.sampler;
    row.seed = config.seed;
    row.k = config.k;
    try {
      const PipelineResult result = run_pipeline(config);
      row.n_samples = result.n_samples;
      row.d_prime = result.embedding.d_prime;
      row.scores = result.scores;
      row.peak_aux_entries = result.memory.peak_aux_entries;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  if (doc.contains("output_csv")) {
    save_sweep_csv(rows, doc.at("output_csv").get<std::string>());
  }
  return rows;
}

void save_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_sweep_csv: cannot open '" + path + "'");
  out.precision(17);
  out << "data,sampler,seed,k,num_samples,d_prime,m1,m2,m3,peak_aux_entries,error\n";
  for (const SweepRow& row : rows) {
    out << row.data << ',' << row.sampler << ',' << row.seed << ',' << row.k << ','
        << row.n_samples << ',' << row.d_prime << ',';
    if (row.scores.has_value()) {
      out << row.scores->m1_rand << ',' << row.scores->m2_mutual_info << ','
          << row.scores->m3_v_measure;
    } else {
      out << ",,";
    }
    out << ',' << row.peak_aux_entries << ',';
    // Commas inside error messages would break the row; replace them.
    std::string error = row.error;
    for (char& c : error) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << error << '\n';
  }
}

}  // namespace mmx
