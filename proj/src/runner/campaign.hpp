#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bench/benchmark.hpp"
#include "optim/optimizer.hpp"
#include "predict/predictor.hpp"

namespace archbench {

/// Seed of one run: FNV-1a over the length-prefixed fields, then a
/// splitmix64 finalizer.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view bench,
                          std::string_view method, int config_index, int trial);

struct BenchmarkSource {
  std::string path;                       // .nbtab file, or
  std::optional<SyntheticSpec> synthetic;  // a synthetic landscape over
  std::string space;                      // this catalog space
  std::string group;                      // search space for transfer analyses; default: bench id
};

enum class MethodFamily { optimizer, predictor };

/// One method entry. A plain entry has a single configuration; a sweep
/// draws `n_configs` configurations from `ranges` (config 0 is always the
/// kind's defaults) and runs each for `seeds` trials.
struct MethodSpec {
  std::string name;
  MethodFamily family = MethodFamily::optimizer;
  nlohmann::json base;  // flat config of the kind, as read
  bool sweep = false;
  int n_configs = 1;
  std::optional<int> seeds;
  nlohmann::json ranges = nlohmann::json::object();

  /// Config `index` as flat JSON (validated).
  nlohmann::json config(int index, std::uint64_t global_seed) const;
  std::string digest() const;
};

/// Default sampling ranges per kind name.
nlohmann::json default_ranges(const std::string &kind);

struct ExperimentConfig {
  std::vector<BenchmarkSource> benchmarks;
  std::vector<MethodSpec> methods;
  int budget = 200;
  int trials = 10;
  std::uint64_t global_seed = 0;
  std::string output_dir = "results";
  int parallelism = 1;
  int train_size = 200;
  int test_size = 200;

  /// Throws Error(validation) naming the offending entry.
  void validate() const;
};

/// Parses the JSON experiment file format. ARCHBENCH_OUT, when set,
/// replaces output_dir. Throws Error(validation) or Error(io).
ExperimentConfig parse_experiment(const nlohmann::json &j);
ExperimentConfig load_experiment(const std::string &path);

struct LoadedBenchmark {
  std::unique_ptr<Benchmark> bench;
  std::string group;
};

LoadedBenchmark load_benchmark(const BenchmarkSource &src);

struct CampaignSummary {
  std::size_t planned = 0;
  std::size_t skipped = 0;  // already present in results.jsonl
  std::size_t completed = 0;
  std::size_t failed = 0;
};

/// Runs every (benchmark, method config, trial) cell not yet recorded in
/// <output_dir>/results.jsonl and appends one line per run. Writes
/// campaign.json with the benchmark metadata analyze needs.
CampaignSummary run_campaign(const ExperimentConfig &cfg);

struct AnalyzeOptions {
  bool regret = true;
  bool kendall = true;
  bool loo = true;
  bool ranks = true;
};

/// Reads a campaign directory and writes regret.csv, kendall.csv, loo.csv,
/// ranks.csv into `out_dir`. Throws Error(missing_cell) listing every
/// missing (method, bench, config) cell. Returns the files written.
std::vector<std::string> analyze(const std::string &results_dir, const std::string &out_dir,
                                 const AnalyzeOptions &opts = {});

struct StatsOptions {
  bool box = true;
  bool rwa = true;
  bool nbhd = true;
  bool time = true;
  bool iqr = true;
  std::size_t sample_cap = 100000;
  int walk_len = 0;  // 0: 10,000 in one walk, or 10 walks of 1,000 beyond sample_cap
  int max_lag = 36;
  int n_walks = 0;
  std::uint64_t seed = 0;
};

/// Landscape statistics of one benchmark as CSV files in `out_dir`.
std::vector<std::string> write_stats(const Benchmark &bench, const std::string &out_dir,
                                     const StatsOptions &opts);

/// Metadata, record count and per-metric value ranges of a tabular file.
std::string bench_info(const std::string &path);

}  // namespace archbench
