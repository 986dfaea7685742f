#include "archbench/archbench.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "analysis/landscape.hpp"
#include "bench/benchmark.hpp"
#include "catalog/catalog.hpp"
#include "common/error.hpp"
#include "graph/equivalence.hpp"
#include "graph/neighborhood.hpp"
#include "optim/optimizer.hpp"
#include "predict/evaluate.hpp"
#include "runner/campaign.hpp"
#include "stats/rank.hpp"

struct archbench_space {
  archbench::SearchSpaceDef def;
};

struct archbench_bench {
  std::unique_ptr<archbench::Benchmark> impl;
};

struct archbench_trajectory {
  archbench::Trajectory impl;
};

namespace {

thread_local std::string last_error;

static_assert(static_cast<int>(archbench::ErrorCode::exhausted) + 1 == ARCHBENCH_ERR_EXHAUSTED);

archbench_status from_code(archbench::ErrorCode code) {
  // The status enum lists the error codes in declaration order after OK.
  return static_cast<archbench_status>(static_cast<int>(code) + 1);
}

archbench_status fail(archbench_status status, const std::string &what) {
  last_error = what;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
archbench_status guarded(Fn &&fn) {
  try {
    fn();
    return ARCHBENCH_OK;
  } catch (const archbench::Error &e) {
    return fail(from_code(e.code()), e.what());
  } catch (const nlohmann::json::exception &e) {
    return fail(ARCHBENCH_ERR_PARSE, e.what());
  } catch (const std::bad_alloc &) {
    return fail(ARCHBENCH_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(ARCHBENCH_ERR_INTERNAL, e.what());
  }
}

archbench_status write_text(const std::string &text, char *buf, size_t cap, size_t *needed) {
  if (needed != nullptr) *needed = text.size() + 1;
  if (buf == nullptr || cap < text.size() + 1) {
    return fail(ARCHBENCH_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(text.size() + 1) + " bytes");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return ARCHBENCH_OK;
}

archbench_status null_argument() { return fail(ARCHBENCH_ERR_NULL_ARGUMENT, "required argument is null"); }

}  // namespace

extern "C" {

const char *archbench_version(void) { return "0.1.0"; }

const char *archbench_status_name(archbench_status status) {
  switch (status) {
    case ARCHBENCH_OK: return "ok";
    case ARCHBENCH_ERR_NULL_ARGUMENT: return "null_argument";
    case ARCHBENCH_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case ARCHBENCH_ERR_INTERNAL: return "internal";
    default:
      if (status > ARCHBENCH_OK && status <= ARCHBENCH_ERR_EXHAUSTED) {
        return archbench::error_code_name(static_cast<archbench::ErrorCode>(status - 1));
      }
      return "unknown";
  }
}

const char *archbench_last_error(void) { return last_error.c_str(); }

archbench_status archbench_space_from_catalog(const char *name, archbench_space **out) {
  if (name == nullptr || out == nullptr) return null_argument();
  return guarded([&] { *out = new archbench_space{archbench::catalog_entry(name).space}; });
}

archbench_status archbench_space_from_json(const char *json, archbench_space **out) {
  if (json == nullptr || out == nullptr) return null_argument();
  return guarded([&] {
    auto def = nlohmann::json::parse(json).get<archbench::SearchSpaceDef>();
    def.validate();
    *out = new archbench_space{std::move(def)};
  });
}

void archbench_space_free(archbench_space *space) { delete space; }

archbench_status archbench_space_size(const archbench_space *space, uint64_t *exact, int *has_exact,
                                      double *log10_size) {
  if (space == nullptr) return null_argument();
  return guarded([&] {
    const auto size = archbench::space_size(space->def);
    if (exact != nullptr) *exact = size.exact.value_or(0);
    if (has_exact != nullptr) *has_exact = size.exact.has_value() ? 1 : 0;
    if (log10_size != nullptr) *log10_size = size.log10;
  });
}

archbench_status archbench_space_sample(const archbench_space *space, uint64_t seed, char *buf, size_t cap,
                                        size_t *needed) {
  if (space == nullptr) return null_argument();
  std::string id;
  const auto st = guarded([&] {
    archbench::Rng rng(seed);
    id = archbench::canonical_encode(archbench::sample_uniform(space->def, rng), space->def).str();
  });
  return st != ARCHBENCH_OK ? st : write_text(id, buf, cap, needed);
}

archbench_status archbench_space_neighbors(const archbench_space *space, const char *arch, char *buf,
                                           size_t cap, size_t *needed) {
  if (space == nullptr || arch == nullptr) return null_argument();
  std::string text;
  const auto st = guarded([&] {
    for (const auto &n : archbench::neighbors(archbench::decode(arch, space->def), space->def)) {
      text += archbench::canonical_encode(n, space->def).str();
      text += '\n';
    }
  });
  return st != ARCHBENCH_OK ? st : write_text(text, buf, cap, needed);
}

archbench_status archbench_space_neighbor_count(const archbench_space *space, const char *arch, size_t *count) {
  if (space == nullptr || arch == nullptr || count == nullptr) return null_argument();
  return guarded([&] { *count = archbench::neighbors(archbench::decode(arch, space->def), space->def).size(); });
}

archbench_status archbench_space_canonicalize(const archbench_space *space, const char *arch, char *buf,
                                              size_t cap, size_t *needed) {
  if (space == nullptr || arch == nullptr) return null_argument();
  std::string id;
  const auto st = guarded([&] {
    id = archbench::canonical_encode(archbench::decode(arch, space->def), space->def).str();
  });
  return st != ARCHBENCH_OK ? st : write_text(id, buf, cap, needed);
}

archbench_status archbench_space_equivalence_classes(const archbench_space *space, uint64_t *count) {
  if (space == nullptr || count == nullptr) return null_argument();
  return guarded([&] { *count = archbench::count_equivalence_classes(space->def); });
}

archbench_status archbench_bench_load(const char *path, archbench_bench **out) {
  if (path == nullptr || out == nullptr) return null_argument();
  return guarded([&] { *out = new archbench_bench{archbench::load_tabular(path)}; });
}

archbench_status archbench_bench_synthetic(const char *spec_json, archbench_bench **out) {
  if (spec_json == nullptr || out == nullptr) return null_argument();
  return guarded([&] {
    auto j = nlohmann::json::parse(spec_json);
    if (!j.contains("space")) throw archbench::Error(archbench::ErrorCode::parameter, "spec needs a \"space\"");
    const auto space = archbench::catalog_entry(j.at("space").get<std::string>()).space;
    j.erase("space");
    const auto spec = j.get<archbench::SyntheticSpec>();
    *out = new archbench_bench{archbench::gen_synthetic(space, spec)};
  });
}

archbench_status archbench_bench_save(const archbench_bench *bench, const char *path) {
  if (bench == nullptr || path == nullptr) return null_argument();
  return guarded([&] {
    if (const auto *t = dynamic_cast<const archbench::TabularBenchmark *>(bench->impl.get())) {
      archbench::save_tabular(*t, path);
    } else if (const auto *s = dynamic_cast<const archbench::SyntheticBenchmark *>(bench->impl.get())) {
      archbench::save_tabular(*archbench::tabulate(*s), path);
    } else {
      throw archbench::Error(archbench::ErrorCode::parameter, "only tabular and synthetic benchmarks can be saved");
    }
  });
}

void archbench_bench_free(archbench_bench *bench) { delete bench; }

archbench_status archbench_bench_id(const archbench_bench *bench, char *buf, size_t cap, size_t *needed) {
  if (bench == nullptr) return null_argument();
  return write_text(bench->impl->id(), buf, cap, needed);
}

archbench_status archbench_bench_query(const archbench_bench *bench, const char *arch, const char *metric,
                                       int epoch, int seed, double *value) {
  if (bench == nullptr || arch == nullptr || value == nullptr) return null_argument();
  return guarded([&] {
    const auto &b = *bench->impl;
    const std::string m = metric != nullptr ? metric : b.default_metric().name;
    const auto policy = seed < 0 ? archbench::SeedPolicy::mean() : archbench::SeedPolicy::fixed(seed);
    *value = b.query(archbench::ArchId(arch), m, epoch < 0 ? std::nullopt : std::optional<int>(epoch), policy);
  });
}

archbench_status archbench_bench_train_time(const archbench_bench *bench, const char *arch, double *seconds) {
  if (bench == nullptr || arch == nullptr || seconds == nullptr) return null_argument();
  return guarded([&] { *seconds = bench->impl->query_train_time(archbench::ArchId(arch)); });
}

archbench_status archbench_bench_info(const char *path, char *buf, size_t cap, size_t *needed) {
  if (path == nullptr) return null_argument();
  std::string text;
  const auto st = guarded([&] { text = archbench::bench_info(path); });
  return st != ARCHBENCH_OK ? st : write_text(text, buf, cap, needed);
}

archbench_status archbench_run_optimizer(const archbench_bench *bench, const char *config_json, uint64_t seed,
                                         archbench_trajectory **out) {
  if (bench == nullptr || config_json == nullptr || out == nullptr) return null_argument();
  return guarded([&] {
    const auto cfg = nlohmann::json::parse(config_json).get<archbench::OptimizerConfig>();
    *out = new archbench_trajectory{archbench::run_optimizer(cfg, *bench->impl, seed)};
  });
}

void archbench_trajectory_free(archbench_trajectory *traj) { delete traj; }

size_t archbench_trajectory_length(const archbench_trajectory *traj) {
  return traj == nullptr ? 0 : traj->impl.steps.size();
}

archbench_status archbench_trajectory_step(const archbench_trajectory *traj, size_t index, double *value,
                                           double *incumbent, double *cumulative_seconds) {
  if (traj == nullptr) return null_argument();
  if (index >= traj->impl.steps.size()) return fail(ARCHBENCH_ERR_PARAMETER, "step index out of range");
  const auto &s = traj->impl.steps[index];
  if (value != nullptr) *value = s.value;
  if (incumbent != nullptr) *incumbent = traj->impl.incumbent[index];
  if (cumulative_seconds != nullptr) *cumulative_seconds = s.cumulative_seconds;
  return ARCHBENCH_OK;
}

archbench_status archbench_trajectory_json(const archbench_trajectory *traj, char *buf, size_t cap,
                                           size_t *needed) {
  if (traj == nullptr) return null_argument();
  return write_text(nlohmann::json(traj->impl).dump(), buf, cap, needed);
}

archbench_status archbench_bench_optimum(const archbench_bench *bench, double *optimum) {
  if (bench == nullptr || optimum == nullptr) return null_argument();
  return guarded([&] { *optimum = archbench::bench_optimum(*bench->impl); });
}

archbench_status archbench_evaluate_predictor(const archbench_bench *bench, const char *config_json,
                                             size_t train_size, size_t test_size, uint64_t seed,
                                             double *spearman) {
  if (bench == nullptr || config_json == nullptr || spearman == nullptr) return null_argument();
  return guarded([&] {
    auto cfg = nlohmann::json::parse(config_json).get<archbench::PredictorConfig>();
    cfg.validate();
    archbench::Rng rng(seed);
    *spearman = archbench::evaluate_predictor(*bench->impl, cfg, train_size, test_size, rng);
  });
}

archbench_status archbench_spearman(const double *a, const double *b, size_t n, double *out) {
  if ((n > 0 && (a == nullptr || b == nullptr)) || out == nullptr) return null_argument();
  return guarded([&] { *out = archbench::spearman({a, n}, {b, n}); });
}

archbench_status archbench_kendall_tau_b(const double *a, const double *b, size_t n, double *out) {
  if ((n > 0 && (a == nullptr || b == nullptr)) || out == nullptr) return null_argument();
  return guarded([&] { *out = archbench::kendall_tau_b({a, n}, {b, n}); });
}

archbench_status archbench_distribution_stats(const archbench_bench *bench, size_t sample_cap, uint64_t seed,
                                              archbench_distribution *out) {
  if (bench == nullptr || out == nullptr) return null_argument();
  return guarded([&] {
    archbench::Rng rng(seed);
    const auto s = archbench::distribution_stats(*bench->impl, sample_cap, rng);
    *out = {s.min, s.q1, s.median, s.q3, s.max, s.mean, s.stddev, s.iqr, s.sample_size, s.exhaustive ? 1 : 0};
  });
}

archbench_status archbench_rwa(const archbench_bench *bench, int walk_len, int max_lag, int n_walks,
                               uint64_t seed, double *out) {
  if (bench == nullptr || out == nullptr) return null_argument();
  return guarded([&] {
    archbench::Rng rng(seed);
    const auto rho = archbench::rwa(*bench->impl, walk_len, max_lag, n_walks, rng);
    std::copy(rho.begin(), rho.end(), out);
  });
}

archbench_status archbench_run_campaign(const char *config_path, const char *output_dir, int require_sweep,
                                        archbench_campaign_summary *summary) {
  if (config_path == nullptr) return null_argument();
  return guarded([&] {
    auto cfg = archbench::load_experiment(config_path);
    if (output_dir != nullptr) cfg.output_dir = output_dir;
    if (require_sweep != 0) {
      bool any = false;
      for (const auto &m : cfg.methods) any = any || m.sweep;
      if (!any) throw archbench::Error(archbench::ErrorCode::validation, "config has no sweep blocks");
    }
    const auto s = archbench::run_campaign(cfg);
    if (summary != nullptr) *summary = {s.planned, s.skipped, s.completed, s.failed};
  });
}

archbench_status archbench_analyze(const char *results_dir, const char *out_dir, unsigned flags) {
  if (results_dir == nullptr || out_dir == nullptr) return null_argument();
  return guarded([&] {
    archbench::AnalyzeOptions opts;
    opts.regret = (flags & ARCHBENCH_ANALYZE_REGRET) != 0;
    opts.kendall = (flags & ARCHBENCH_ANALYZE_KENDALL) != 0;
    opts.loo = (flags & ARCHBENCH_ANALYZE_LOO) != 0;
    opts.ranks = (flags & ARCHBENCH_ANALYZE_RANKS) != 0;
    archbench::analyze(results_dir, out_dir, opts);
  });
}

archbench_status archbench_write_stats(const archbench_bench *bench, const char *out_dir, unsigned flags,
                                       size_t sample_cap, uint64_t seed) {
  if (bench == nullptr || out_dir == nullptr) return null_argument();
  return guarded([&] {
    archbench::StatsOptions opts;
    opts.box = (flags & ARCHBENCH_STATS_BOX) != 0;
    opts.rwa = (flags & ARCHBENCH_STATS_RWA) != 0;
    opts.nbhd = (flags & ARCHBENCH_STATS_NBHD) != 0;
    opts.time = (flags & ARCHBENCH_STATS_TIME) != 0;
    opts.iqr = (flags & ARCHBENCH_STATS_IQR) != 0;
    if (sample_cap > 0) opts.sample_cap = sample_cap;
    opts.seed = seed;
    archbench::write_stats(*bench->impl, out_dir, opts);
  });
}

}  // extern "C"
