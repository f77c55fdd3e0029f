#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "mmx/pipeline.hpp"

namespace {

void print_run(const mmx::RunConfig& config, const mmx::PipelineResult& result) {
  std::printf("data=%s sampler=%s clusterer=%s k=%d seed=%llu\n", config.data.c_str(),
              config.sampler.c_str(), config.clusterer.c_str(), config.k,
              static_cast<unsigned long long>(config.seed));
  std::printf("N=%lld s=%d d'=%d\n", static_cast<long long>(result.memory.n_objects),
              result.n_samples, result.embedding.d_prime);
  if (result.scores.has_value()) {
    std::printf("M1 %.2f%%  M2 %.2f%%  M3 %.2f%%\n", 100.0 * result.scores->m1_rand,
                100.0 * result.scores->m2_mutual_info, 100.0 * result.scores->m3_v_measure);
  } else {
    std::printf("no ground-truth labels; scores skipped\n");
  }
  std::printf("peak_aux_entries=%lld (%.2f per object)\n",
              static_cast<long long>(result.memory.peak_aux_entries),
              static_cast<double>(result.memory.peak_aux_entries) /
                  static_cast<double>(result.memory.n_objects));
  std::printf("runtime %.3f s\n", result.runtime_seconds);
}

void print_sweep(const std::vector<mmx::SweepRow>& rows) {
  std::printf("%-28s %-8s %6s %3s %6s %8s %8s %8s\n", "data", "sampler", "seed", "k", "d'",
              "M1", "M2", "M3");
  for (const mmx::SweepRow& row : rows) {
    if (row.ok() && row.scores.has_value()) {
      std::printf("%-28s %-8s %6llu %3d %6d %7.2f%% %7.2f%% %7.2f%%\n", row.data.c_str(),
                  row.sampler.c_str(), static_cast<unsigned long long>(row.seed), row.k,
                  row.d_prime, 100.0 * row.scores->m1_rand, 100.0 * row.scores->m2_mutual_info,
                  100.0 * row.scores->m3_v_measure);
    } else if (row.ok()) {
      std::printf("%-28s %-8s %6llu %3d %6d %26s\n", row.data.c_str(), row.sampler.c_str(),
                  static_cast<unsigned long long>(row.seed), row.k, row.d_prime, "(no truth)");
    } else {
      std::printf("%-28s %-8s %6llu %3d  error: %s\n", row.data.c_str(), row.sampler.c_str(),
                  static_cast<unsigned long long>(row.seed), row.k, row.error.c_str());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise minimax distances under a linear memory budget: "
               "MST-adaptive sampling, Euclidean embedding, GMM clustering"};
  app.require_subcommand(1);

  mmx::RunConfig config;
  std::string label_col;
  CLI::App* run = app.add_subcommand("run", "One end-to-end clustering run");
  run->add_option("--data", config.data, "CSV path, or generator spec gen:<name>:<n>")
      ->required();
  run->add_option("--sampler", config.sampler, "mm, kmeans, dpp, random, or none")
      ->required()
      ->check(CLI::IsMember({"mm", "kmeans", "dpp", "random", "none"}));
  run->add_option("--k", config.k, "number of clusters")->required();
  run->add_option("--seed", config.seed, "master RNG seed")->required();
  CLI::Option* label_opt =
      run->add_option("--label-col", label_col, "ground-truth column name in the CSV");
  run->add_flag("--standardize", config.standardize, "z-score the feature columns");
  run->add_option("--num-samples", config.num_samples,
                  "override the ceil(sqrt(N)) sample count");
  run->add_option("--max-dim", config.max_dim, "cap for the embedding dimension search");
  run->add_option("--restarts", config.restarts, "clustering restarts");
  run->add_option("--clusterer", config.clusterer, "gmm (default) or kmeans")
      ->check(CLI::IsMember({"gmm", "kmeans"}));
  run->add_flag("--allow-dense", config.allow_dense,
                "let sampler=none run above the dense cap");
  run->add_option("--out", config.out_dir, "output directory for artifacts")->required();

  std::string sweep_config;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a grid of configurations");
  sweep->add_option("--config", sweep_config, "sweep description JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (label_opt->count() > 0) config.label_column = label_col;
      print_run(config, mmx::run_pipeline(config));
    } else {
      print_sweep(mmx::run_sweep(sweep_config));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
