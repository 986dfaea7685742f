#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bench/benchmark.hpp"
#include "predict/predictor.hpp"

namespace archbench {

enum class OptimizerKind { rs, re, ls, bananas, npenas };

const char *optimizer_kind_name(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string &text);

enum class Acquisition { its, ucb };

struct EvolutionParams {
  int population = 50;
  int sample = 10;
};

struct LocalSearchParams {
  bool restart_on_optimum = true;
};

struct BananasParams {
  int n_init = 10;
  int ensemble_size = 3;
  int candidates_per_iter = 100;
  int top_k = 10;  // parents for candidate generation
  Acquisition acquisition = Acquisition::its;
  double ucb_beta = 1.0;
  PredictorConfig predictor{PredictorKind::gp, {}, {}, {}};
};

struct NpenasParams {
  int n_init = 10;
  int parents = 20;
  int children = 2;
  PredictorConfig predictor{PredictorKind::gp, {}, {}, {}};
};

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::rs;
  int budget = 200;
  std::string metric;  // empty: the benchmark's default metric
  EvolutionParams re;
  LocalSearchParams ls;
  BananasParams bananas;
  NpenasParams npenas;

  /// Throws Error(parameter).
  void validate() const;
};

void to_json(nlohmann::json &j, const OptimizerConfig &cfg);
void from_json(const nlohmann::json &j, OptimizerConfig &cfg);

/// Stable hex digest of the canonical JSON form.
std::string config_digest(const OptimizerConfig &cfg);

struct Step {
  int index = 0;
  ArchId arch;
  double value = 0.0;
  double train_seconds = 0.0;
  double cumulative_seconds = 0.0;
};

struct Trajectory {
  std::vector<Step> steps;
  std::vector<double> incumbent;  // best-so-far raw value after each step
  Orientation orientation = Orientation::higher_better;
  std::string bench;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string status = "ok";     // ok | no_neighbor | exhausted
  std::vector<ArchId> local_optima;  // declared by local search
  int fallbacks = 0;                 // model-based steps that fell back to random

  std::optional<double> final_incumbent() const;
  const Step *best_step() const;
};

void to_json(nlohmann::json &j, const Trajectory &t);

/// Runs one search for min(budget, |space|) distinct queries. Random draws
/// and mutations are restricted to the stored architectures of tabular
/// benchmarks. Benchmark query errors propagate; an empty neighborhood ends
/// the run with status "no_neighbor" and the partial trajectory.
Trajectory run_optimizer(const OptimizerConfig &cfg, const Benchmark &bench, std::uint64_t seed);

/// Best value of `metric` over every architecture the benchmark answers.
/// Throws Error(parameter) when the space cannot be enumerated.
double bench_optimum(const Benchmark &bench, const std::string &metric = {});

/// Non-negative gap between `optimum` and the incumbent after `prefix`
/// steps (all steps when omitted), in the metric's favorable direction.
double incumbent_regret(const Trajectory &t, double optimum,
                        std::optional<std::size_t> prefix = std::nullopt);

}  // namespace archbench
