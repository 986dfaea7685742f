#include "runner/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "analysis/csv.hpp"
#include "analysis/landscape.hpp"
#include "analysis/transfer.hpp"
#include "catalog/catalog.hpp"
#include "common/error.hpp"
#include "common/hash.hpp"
#include "predict/evaluate.hpp"

namespace archbench {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view bench,
                          std::string_view method, int config_index, int trial) {
  std::string key;
  key.reserve(bench.size() + method.size() + 48);
  key += std::to_string(global_seed) + ':';
  key += std::to_string(bench.size()) + ':';
  key += bench;
  key += std::to_string(method.size()) + ':';
  key += method;
  key += std::to_string(config_index) + ':' + std::to_string(trial);
  return Rng::mix64(hash_bytes(key));
}

namespace {

[[noreturn]] void invalid(const std::string &what) { throw Error(ErrorCode::validation, what); }

bool is_predictor_kind(const std::string &kind) { return kind == "gp" || kind == "rf" || kind == "gbt"; }

json canonical(MethodFamily family, const json &flat) {
  if (family == MethodFamily::predictor) return json(flat.get<PredictorConfig>());
  return json(flat.get<OptimizerConfig>());
}

// Draws one value for `param` from a range spec: [lo, hi] (integers when the
// default is an integer, log-uniform for the parameters listed as such),
// {"log": [lo, hi]}, {"uniform": [lo, hi]} or {"choice": [...]}.
json draw(const std::string &param, const json &spec, const json &current, Rng &rng) {
  auto bounds = [&](const json &pair) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      invalid("range for '" + param + "' must be [lo, hi]");
    }
    const double lo = pair[0].get<double>(), hi = pair[1].get<double>();
    if (!(lo <= hi)) invalid("range for '" + param + "' has lo > hi");
    return std::make_pair(lo, hi);
  };
  if (spec.is_object()) {
    if (spec.contains("choice")) {
      const auto &c = spec.at("choice");
      if (!c.is_array() || c.empty()) invalid("choice for '" + param + "' must be a non-empty list");
      return c[rng.uniform_index(c.size())];
    }
    if (spec.contains("log")) {
      const auto [lo, hi] = bounds(spec.at("log"));
      if (lo <= 0) invalid("log range for '" + param + "' must be positive");
      return rng.log_uniform(lo, hi);
    }
    if (spec.contains("uniform")) {
      const auto [lo, hi] = bounds(spec.at("uniform"));
      return rng.uniform(lo, hi);
    }
    invalid("range for '" + param + "' needs one of choice, log, uniform");
  }
  const auto [lo, hi] = bounds(spec);
  if (current.is_number_integer() || current.is_number_unsigned()) {
    const auto a = static_cast<std::int64_t>(std::ceil(lo));
    const auto b = static_cast<std::int64_t>(std::floor(hi));
    if (a > b) invalid("integer range for '" + param + "' is empty");
    return a + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(b - a + 1)));
  }
  return rng.uniform(lo, hi);
}

std::string family_name(MethodFamily f) { return f == MethodFamily::predictor ? "predictor" : "optimizer"; }

}  // namespace

json default_ranges(const std::string &kind) {
  if (kind == "gp") return {{"lengthscale", {{"log", {0.1, 100.0}}}}, {"noise", {{"log", {1e-4, 1e-1}}}}};
  if (kind == "rf") return {{"n_trees", {16, 512}}, {"max_depth", {4, 32}}};
  if (kind == "gbt") {
    return {{"n_rounds", {32, 512}},
            {"learning_rate", {{"log", {0.01, 0.5}}}},
            {"max_depth", {2, 10}},
            {"l2", {{"log", {1e-3, 10.0}}}}};
  }
  if (kind == "re") return {{"population", {10, 100}}, {"sample", {2, 100}}};
  if (kind == "bananas") {
    return {{"n_init", {5, 30}},
            {"candidates_per_iter", {20, 200}},
            {"ensemble_size", {1, 5}},
            {"acquisition", {{"choice", {"its", "ucb"}}}}};
  }
  if (kind == "npenas") return {{"n_init", {5, 30}}, {"parents", {5, 50}}, {"children", {1, 5}}};
  return json::object();
}

json MethodSpec::config(int index, std::uint64_t global_seed) const {
  if (index < 0 || index >= n_configs) invalid("config index out of range for '" + name + "'");
  const json base_cfg = canonical(family, base);
  if (!sweep || index == 0) return base_cfg;
  Rng rng(derive_seed(global_seed, "sweep", name, index, 0));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    json flat = base_cfg;
    for (const auto &[param, spec] : ranges.items()) {
      if (!flat.contains(param)) invalid("'" + name + "' has no parameter '" + param + "'");
      flat[param] = draw(param, spec, flat[param], rng);
    }
    try {
      return canonical(family, flat);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::parameter) throw;
    }
  }
  invalid("ranges of '" + name + "' yield no valid configuration");
}

std::string MethodSpec::digest() const {
  json j{{"name", name}, {"family", family_name(family)}, {"base", base},
         {"sweep", sweep}, {"n_configs", n_configs}, {"ranges", ranges}};
  return hex64(hash_bytes(j.dump()));
}

void ExperimentConfig::validate() const {
  if (benchmarks.empty()) invalid("no benchmarks");
  if (methods.empty()) invalid("no methods");
  if (budget < 1) invalid("budget must be >= 1");
  if (trials < 1) invalid("trials must be >= 1");
  if (parallelism < 1) invalid("parallelism must be >= 1");
  if (train_size < 2 || test_size < 2) invalid("train_size and test_size must be >= 2");
  if (output_dir.empty()) invalid("output_dir is empty");
  for (std::size_t i = 0; i < benchmarks.size(); ++i) {
    const auto &b = benchmarks[i];
    const std::string where = "benchmarks[" + std::to_string(i) + "]";
    if (b.synthetic.has_value() == !b.path.empty()) invalid(where + " needs exactly one of path, synthetic");
    if (!b.path.empty() && !fs::exists(b.path)) invalid(where + ": file '" + b.path + "' does not exist");
    if (b.synthetic) {
      if (b.space.empty()) invalid(where + ": synthetic benchmarks need a catalog space");
      try {
        catalog_entry(b.space);
        b.synthetic->validate();
      } catch (const Error &e) {
        invalid(where + ": " + e.what());
      }
    }
  }
  std::set<std::string> names;
  for (const auto &m : methods) {
    if (m.name.empty()) invalid("method without a name");
    if (!names.insert(m.name).second) invalid("duplicate method name '" + m.name + "'");
    if (m.n_configs < 1) invalid("method '" + m.name + "': n_configs must be >= 1");
    if (!m.sweep && m.n_configs != 1) invalid("method '" + m.name + "': only sweeps have several configs");
    if (m.seeds && *m.seeds < 1) invalid("method '" + m.name + "': seeds must be >= 1");
    try {
      for (int c = 0; c < std::min(m.n_configs, 2); ++c) m.config(c, global_seed);
    } catch (const Error &e) {
      invalid("method '" + m.name + "': " + e.what());
    } catch (const json::exception &e) {
      invalid("method '" + m.name + "': " + e.what());
    }
  }
}

ExperimentConfig parse_experiment(const json &j) {
  ExperimentConfig cfg;
  try {
    if (!j.is_object()) invalid("experiment config must be an object");
    static const std::set<std::string> known = {"benchmarks", "methods", "budget", "trials", "global_seed",
                                                "output_dir", "parallelism", "train_size", "test_size"};
    for (const auto &[key, v] : j.items()) {
      if (!known.contains(key)) invalid("unknown key '" + key + "'");
    }
    cfg.budget = j.value("budget", cfg.budget);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.global_seed = j.value("global_seed", cfg.global_seed);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.parallelism = j.value("parallelism", cfg.parallelism);
    cfg.train_size = j.value("train_size", cfg.train_size);
    cfg.test_size = j.value("test_size", cfg.test_size);
    for (const auto &b : j.at("benchmarks")) {
      BenchmarkSource src;
      src.path = b.value("path", std::string());
      if (b.contains("synthetic")) src.synthetic = b.at("synthetic").get<SyntheticSpec>();
      src.space = b.value("space", std::string());
      src.group = b.value("group", std::string());
      cfg.benchmarks.push_back(std::move(src));
    }
    for (const auto &m : j.at("methods")) {
      MethodSpec spec;
      if (m.contains("sweep")) {
        const auto &s = m.at("sweep");
        const auto kind = s.at("kind").get<std::string>();
        spec.sweep = true;
        spec.family = is_predictor_kind(kind) ? MethodFamily::predictor : MethodFamily::optimizer;
        spec.base = s.value("base", json::object());
        spec.base["kind"] = kind;
        spec.n_configs = s.value("n_configs", 300);
        if (s.contains("seeds")) spec.seeds = s.at("seeds").get<int>();
        spec.ranges = s.contains("ranges") ? s.at("ranges") : default_ranges(kind);
        spec.name = m.value("name", kind + "-sweep");
      } else if (m.contains("optimizer")) {
        spec.base = m.at("optimizer");
        spec.name = m.value("name", spec.base.at("kind").get<std::string>());
      } else if (m.contains("predictor")) {
        spec.family = MethodFamily::predictor;
        spec.base = m.at("predictor");
        spec.name = m.value("name", spec.base.at("kind").get<std::string>());
      } else {
        invalid("method entries need one of optimizer, predictor, sweep");
      }
      if (m.contains("seeds")) spec.seeds = m.at("seeds").get<int>();
      // The campaign budget applies unless the method sets its own.
      if (spec.family == MethodFamily::optimizer && !spec.base.contains("budget")) {
        spec.base["budget"] = cfg.budget;
      }
      cfg.methods.push_back(std::move(spec));
    }
  } catch (const json::exception &e) {
    invalid(std::string("experiment config: ") + e.what());
  } catch (const Error &e) {
    if (e.code() == ErrorCode::validation) throw;
    invalid(std::string("experiment config: ") + e.what());
  }
  if (const char *out = std::getenv("ARCHBENCH_OUT"); out != nullptr && *out != '\0') cfg.output_dir = out;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot read '" + path + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception &e) {
    invalid("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_experiment(j);
}

LoadedBenchmark load_benchmark(const BenchmarkSource &src) {
  LoadedBenchmark out;
  if (src.synthetic) {
    out.bench = gen_synthetic(catalog_entry(src.space).space, *src.synthetic);
  } else {
    out.bench = load_tabular(src.path);
  }
  out.group = src.group.empty() ? out.bench->id() : src.group;
  return out;
}

namespace {

struct Cell {
  std::size_t bench = 0;
  std::size_t method = 0;
  int config = 0;
  int trial = 0;
  std::string run_id;
};

int trials_of(const MethodSpec &m, const ExperimentConfig &cfg) { return m.seeds.value_or(cfg.trials); }

// Run ids already present; drops a torn final line left by an interrupted
// write so appends start on a fresh line.
std::unordered_set<std::string> recorded_runs(const fs::path &path) {
  std::unordered_set<std::string> ids;
  if (!fs::exists(path)) return ids;
  std::ifstream f(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    ++line_no;
    if (end == std::string::npos) {
      f.close();
      fs::resize_file(path, pos);
      break;
    }
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    try {
      ids.insert(json::parse(line).at("run_id").get<std::string>());
    } catch (const json::exception &e) {
      throw FormatError(line_no, std::string("bad results record: ") + e.what());
    }
  }
  return ids;
}

json run_cell(const ExperimentConfig &cfg, const Benchmark &bench, const MethodSpec &method,
              const json &config, const Cell &cell) {
  const auto seed = derive_seed(cfg.global_seed, bench.id(), method.name, cell.config, cell.trial);
  json rec{{"run_id", cell.run_id},      {"bench", bench.id()},   {"method", method.name},
           {"cfg_idx", cell.config},     {"trial", cell.trial},   {"seed", seed},
           {"config", config},           {"steps", json::array()}, {"score", nullptr},
           {"status", "ok"}};
  const auto start = std::chrono::steady_clock::now();
  try {
    if (method.family == MethodFamily::optimizer) {
      const auto traj = run_optimizer(config.get<OptimizerConfig>(), bench, seed);
      json tj = traj;
      rec["steps"] = std::move(tj["steps"]);
      if (auto v = traj.final_incumbent()) rec["score"] = *v;
      rec["status"] = traj.status;
    } else {
      Rng rng(seed);
      rec["score"] = evaluate_predictor(bench, config.get<PredictorConfig>(),
                                        static_cast<std::size_t>(cfg.train_size),
                                        static_cast<std::size_t>(cfg.test_size), rng);
    }
  } catch (const std::exception &e) {
    rec["status"] = "failed";
    rec["error"] = e.what();
  }
  rec["wall_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

CampaignSummary run_campaign(const ExperimentConfig &cfg) {
  cfg.validate();
  std::vector<LoadedBenchmark> benches;
  std::set<std::string> ids;
  for (const auto &src : cfg.benchmarks) {
    benches.push_back(load_benchmark(src));
    if (!ids.insert(benches.back().bench->id()).second) {
      invalid("duplicate benchmark id '" + benches.back().bench->id() + "'");
    }
  }
  std::vector<std::vector<json>> configs;
  std::vector<std::string> digests;
  for (const auto &m : cfg.methods) {
    configs.emplace_back();
    for (int c = 0; c < m.n_configs; ++c) configs.back().push_back(m.config(c, cfg.global_seed));
    digests.push_back(m.digest());
  }

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  json meta{{"global_seed", cfg.global_seed}, {"budget", cfg.budget},
            {"train_size", cfg.train_size},   {"test_size", cfg.test_size}};
  for (const auto &b : benches) {
    const auto &m = b.bench->default_metric();
    meta["benchmarks"].push_back({{"id", b.bench->id()},
                                  {"group", b.group},
                                  {"backend", backend_name(b.bench->backend())},
                                  {"metric", m.name},
                                  {"orientation", orientation_name(m.orientation)}});
  }
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    const auto &m = cfg.methods[i];
    meta["methods"].push_back({{"name", m.name},
                               {"family", family_name(m.family)},
                               {"n_configs", m.n_configs},
                               {"trials", trials_of(m, cfg)},
                               {"digest", digests[i]},
                               {"configs", configs[i]}});
  }
  {
    std::ofstream f(dir / "campaign.json", std::ios::binary);
    f << meta.dump(2) << '\n';
    if (!f) throw Error(ErrorCode::io, "cannot write campaign.json in '" + cfg.output_dir + "'");
  }

  const auto results = dir / "results.jsonl";
  const auto done = recorded_runs(results);
  CampaignSummary summary;
  std::vector<Cell> todo;
  for (std::size_t b = 0; b < benches.size(); ++b) {
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      for (int c = 0; c < cfg.methods[m].n_configs; ++c) {
        for (int t = 0; t < trials_of(cfg.methods[m], cfg); ++t) {
          Cell cell{b, m, c, t, {}};
          cell.run_id = hex64(hash_bytes(benches[b].bench->id() + '\n' + digests[m] + '\n' +
                                         std::to_string(c) + '\n' + std::to_string(t)));
          ++summary.planned;
          if (done.contains(cell.run_id)) {
            ++summary.skipped;
          } else {
            todo.push_back(std::move(cell));
          }
        }
      }
    }
  }

  std::ofstream out(results, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::io, "cannot append to '" + results.string() + "'");
  std::mutex write_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      const auto &cell = todo[i];
      const auto rec = run_cell(cfg, *benches[cell.bench].bench, cfg.methods[cell.method],
                                configs[cell.method][static_cast<std::size_t>(cell.config)], cell);
      const auto line = rec.dump();
      std::lock_guard lock(write_mutex);
      out << line << '\n';
      out.flush();
      if (rec["status"] == "failed") {
        ++summary.failed;
      } else {
        ++summary.completed;
      }
    }
  };
  const int n = std::min<int>(cfg.parallelism, static_cast<int>(std::max<std::size_t>(todo.size(), 1)));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();
  if (!out) throw Error(ErrorCode::io, "write to '" + results.string() + "' failed");
  return summary;
}

namespace {

json read_json_file(const fs::path &path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
  try {
    return json::parse(f);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::format, "'" + path.string() + "': " + e.what());
  }
}

struct MethodMeta {
  std::string name;
  MethodFamily family;
  int n_configs;
};

}  // namespace

std::vector<std::string> analyze(const std::string &results_dir, const std::string &out_dir,
                                 const AnalyzeOptions &opts) {
  const fs::path dir(results_dir);
  const json meta = read_json_file(dir / "campaign.json");
  std::map<std::string, TaskInfo> tasks;
  std::vector<std::string> bench_ids;
  for (const auto &b : meta.at("benchmarks")) {
    const auto id = b.at("id").get<std::string>();
    bench_ids.push_back(id);
    tasks[id] = {b.at("group").get<std::string>(), parse_orientation(b.at("orientation").get<std::string>())};
  }
  std::vector<MethodMeta> methods;
  for (const auto &m : meta.at("methods")) {
    methods.push_back({m.at("name").get<std::string>(),
                       m.at("family") == "predictor" ? MethodFamily::predictor : MethodFamily::optimizer,
                       m.at("n_configs").get<int>()});
  }

  // (method, bench, cfg) -> trial -> score; the last record of a run wins.
  std::map<std::tuple<std::string, std::string, int>, std::map<int, std::pair<double, std::uint64_t>>> cells;
  {
    std::ifstream f(dir / "results.jsonl", std::ios::binary);
    if (!f) throw Error(ErrorCode::io, "cannot read results.jsonl in '" + results_dir + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
      ++line_no;
      if (line.empty()) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::exception &e) {
        throw FormatError(line_no, std::string("bad results record: ") + e.what());
      }
      const auto key = std::make_tuple(rec.at("method").get<std::string>(), rec.at("bench").get<std::string>(),
                                       rec.at("cfg_idx").get<int>());
      const int trial = rec.at("trial").get<int>();
      if (rec.at("status") == "failed" || rec.at("score").is_null()) {
        auto it = cells.find(key);
        if (it != cells.end()) it->second.erase(trial);
        continue;
      }
      cells[key][trial] = {rec.at("score").get<double>(), rec.at("seed").get<std::uint64_t>()};
    }
  }

  std::vector<std::string> missing;
  std::vector<SweepResult> results;
  for (const auto &m : methods) {
    for (const auto &b : bench_ids) {
      for (int c = 0; c < m.n_configs; ++c) {
        auto it = cells.find({m.name, b, c});
        if (it == cells.end() || it->second.empty()) {
          missing.push_back(m.name + "/" + b + "/" + std::to_string(c));
          continue;
        }
        SweepResult r{m.name, b, c, {}, {}};
        for (const auto &[trial, v] : it->second) {
          r.scores.push_back(v.first);
          r.seeds.push_back(v.second);
        }
        results.push_back(std::move(r));
      }
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto &m : missing) list += "\n  " + m;
    throw Error(ErrorCode::missing_cell, std::to_string(missing.size()) + " missing cells:" + list);
  }

  auto tasks_for = [&](MethodFamily family) {
    if (family == MethodFamily::optimizer) return tasks;
    auto copy = tasks;
    for (auto &[id, info] : copy) info.orientation = Orientation::higher_better;
    return copy;
  };

  Labeled<Matrix> regrets, kendalls;
  Labeled<std::vector<LooRow>> loos;
  Labeled<SweepTable> tables;
  for (const auto &m : methods) {
    if (m.n_configs < 2) continue;
    const auto table = make_sweep_table(results, tasks_for(m.family), m.name);
    if (opts.regret) regrets.emplace_back(m.name, regret_matrix(table));
    if (opts.kendall) kendalls.emplace_back(m.name, kendall_matrix(table));
    if (opts.loo && table.spaces().size() >= 2) {
      loos.emplace_back(m.name, leave_one_out(table));
      tables.emplace_back(m.name, table);
    }
  }

  Labeled<RankTable> ranks;
  if (opts.ranks) {
    std::vector<std::string> groups;
    for (const auto &b : bench_ids) {
      const auto &g = tasks.at(b).space;
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
    for (auto family : {MethodFamily::optimizer, MethodFamily::predictor}) {
      const auto family_tasks = tasks_for(family);
      std::map<std::string, std::map<std::string, double>> by_default, by_tuned;
      for (const auto &m : methods) {
        if (m.family != family) continue;
        const auto table = make_sweep_table(results, family_tasks, m.name);
        for (std::size_t t = 0; t < table.tasks.size(); ++t) {
          const auto &row = table.means[t];
          const bool higher = table.orientation[t] == Orientation::higher_better;
          by_default[m.name][table.tasks[t]] = row.front();
          by_tuned[m.name][table.tasks[t]] =
              higher ? *std::max_element(row.begin(), row.end()) : *std::min_element(row.begin(), row.end());
        }
      }
      if (by_default.empty()) continue;
      const auto prefix = family_name(family) + "/";
      for (const auto &[label, scores] : {std::pair{"default", &by_default}, std::pair{"tuned", &by_tuned}}) {
        ranks.emplace_back(prefix + label + "/all", avg_rank_table(*scores, family_tasks));
        if (groups.size() < 2) continue;
        for (const auto &g : groups) {
          ranks.emplace_back(prefix + label + "/" + g, avg_rank_table(*scores, family_tasks, {g}));
        }
      }
    }
  }

  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto emit = [&](const CsvTable &t, const std::string &name) {
    const auto path = (fs::path(out_dir) / name).string();
    t.write(path);
    written.push_back(path);
  };
  if (opts.regret) emit(regret_csv(regrets), "regret.csv");
  if (opts.kendall) emit(kendall_csv(kendalls), "kendall.csv");
  if (opts.loo) emit(loo_csv(loos, tables), "loo.csv");
  if (opts.ranks) emit(ranks_csv(ranks), "ranks.csv");
  return written;
}

std::vector<std::string> write_stats(const Benchmark &bench, const std::string &out_dir,
                                     const StatsOptions &opts) {
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto emit = [&](const CsvTable &t, const std::string &name) {
    const auto path = (fs::path(out_dir) / name).string();
    t.write(path);
    written.push_back(path);
  };
  // Each statistic gets its own stream so enabling one never shifts another.
  auto rng_for = [&](int k) { return Rng(derive_seed(opts.seed, bench.id(), "stats", k, 0)); };
  const auto &id = bench.id();
  if (opts.box) {
    auto rng = rng_for(0);
    emit(boxstats_csv({{id, distribution_stats(bench, opts.sample_cap, rng)}}), "boxstats.csv");
  }
  if (opts.rwa) {
    std::uint64_t count = 0;
    if (auto stored = bench.stored_ids()) {
      count = stored->size();
    } else {
      count = space_size(bench.space()).exact.value_or(UINT64_MAX);
    }
    const bool small = count <= opts.sample_cap;
    const int walk_len = opts.walk_len > 0 ? opts.walk_len : (small ? 10000 : 1000);
    const int n_walks = opts.n_walks > 0 ? opts.n_walks : (small ? 1 : 10);
    auto rng = rng_for(1);
    emit(rwa_csv({{id, rwa(bench, walk_len, opts.max_lag, n_walks, rng)}}), "rwa.csv");
  }
  if (opts.nbhd) {
    auto rng = rng_for(2);
    emit(nbhd_csv({{id, avg_neighborhood_size(bench.space(), opts.sample_cap, rng)}}), "nbhd.csv");
  }
  if (opts.time) {
    auto rng = rng_for(3);
    emit(traintime_csv({{id, avg_train_time(bench, opts.sample_cap, rng)}}), "traintime.csv");
  }
  if (opts.iqr && !bench.space().op_vocab.empty()) {
    std::vector<int> counts;
    for (int q = 1; q <= static_cast<int>(bench.space().op_vocab.size()); ++q) counts.push_back(q);
    auto rng = rng_for(4);
    emit(iqr_csv({{id, iqr_vs_num_ops(bench, counts, opts.sample_cap, rng)}}), "iqr.csv");
  }
  return written;
}

std::string bench_info(const std::string &path) {
  const auto bench = load_tabular(path);
  std::ostringstream os;
  os << "id: " << bench->id() << '\n';
  os << "space: " << bench->space().space_id << '\n';
  os << "seeds: " << bench->seed_count() << '\n';
  os << "records: " << bench->records().size() << '\n';
  for (std::size_t m = 0; m < bench->metrics().size(); ++m) {
    const auto &info = bench->metrics()[m];
    os << "metric " << info.name << " (" << orientation_name(info.orientation) << ", " << info.epochs.size()
       << " epochs): ";
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto &r : bench->records()) {
      for (const auto &per_seed : r.values[m]) {
        for (double v : per_seed) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
    if (bench->records().empty()) {
      os << "no values\n";
    } else {
      os << "min " << format_number(lo) << ", max " << format_number(hi) << '\n';
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto &r : bench->records()) {
    for (double v : r.train_time) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo <= hi) os << "train_time: min " << format_number(lo) << ", max " << format_number(hi) << '\n';
  if (!bench->extra().empty()) os << "extra: " << bench->extra().dump() << '\n';
  return os.str();
}

}  // namespace archbench
