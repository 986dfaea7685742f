#include <algorithm>
#include <cmath>
#include <limits>

#include "bench/benchmark.hpp"
#include "common/error.hpp"
#include "common/hash.hpp"
#include "graph/neighborhood.hpp"

namespace archbench {

std::vector<int> slot_values(const CellGraph &cell) {
  std::vector<int> v;
  v.reserve(cell.ops.size() + cell.active.size() + cell.aux.size() + cell.macro.size());
  v.insert(v.end(), cell.ops.begin(), cell.ops.end());
  for (auto b : cell.active) v.push_back(b);
  for (auto b : cell.aux) v.push_back(b);
  v.insert(v.end(), cell.macro.begin(), cell.macro.end());
  return v;
}

std::vector<int> slot_cardinalities(const SearchSpaceDef &space) {
  std::vector<int> c(space.labeled_slot_count(), static_cast<int>(space.op_vocab.size()));
  if (space.variable_topology) c.insert(c.end(), space.edges.size(), 2);
  c.insert(c.end(), space.aux_edges.size(), 2);
  for (const auto &m : space.macro_slots) c.push_back(m.cardinality);
  return c;
}

void SyntheticSpec::validate() const {
  if (!(ruggedness >= 0.0 && ruggedness <= 1.0)) {
    throw Error(ErrorCode::parameter, "ruggedness must be in [0, 1]");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw Error(ErrorCode::parameter, "noise must be >= 0");
  if (seeds < 1) throw Error(ErrorCode::parameter, "seeds must be >= 1");
  if (epochs.empty() || epochs.front() < 1) {
    throw Error(ErrorCode::parameter, "epochs must be positive");
  }
  for (std::size_t i = 1; i < epochs.size(); ++i) {
    if (epochs[i] <= epochs[i - 1]) throw Error(ErrorCode::parameter, "epochs must increase");
  }
  if (!(time_base >= 0.0) || !std::isfinite(time_base)) {
    throw Error(ErrorCode::parameter, "time_base must be >= 0");
  }
  if (metric.empty()) throw Error(ErrorCode::parameter, "metric name is empty");
}

void to_json(nlohmann::json &j, const SyntheticSpec &spec) {
  j = nlohmann::json{{"seed", spec.seed},       {"ruggedness", spec.ruggedness},
                     {"iid", spec.iid},         {"noise", spec.noise},
                     {"seeds", spec.seeds},     {"epochs", spec.epochs},
                     {"time_base", spec.time_base}, {"metric", spec.metric}};
  if (!spec.name.empty()) j["name"] = spec.name;
  if (!spec.op_time_costs.empty()) j["op_time_costs"] = spec.op_time_costs;
  if (!spec.slot_weights.empty()) j["slot_weights"] = spec.slot_weights;
  if (!spec.pair_weights.empty()) j["pair_weights"] = spec.pair_weights;
}

void from_json(const nlohmann::json &j, SyntheticSpec &spec) {
  spec = SyntheticSpec{};
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.ruggedness = j.value("ruggedness", 0.0);
  spec.iid = j.value("iid", false);
  spec.noise = j.value("noise", 0.0);
  spec.seeds = j.value("seeds", 1);
  spec.epochs = j.value("epochs", std::vector<int>{1});
  spec.time_base = j.value("time_base", 100.0);
  spec.metric = j.value("metric", std::string("valid_acc"));
  spec.name = j.value("name", std::string());
  spec.op_time_costs = j.value("op_time_costs", std::vector<double>{});
  spec.slot_weights = j.value("slot_weights", std::vector<std::vector<double>>{});
  spec.pair_weights = j.value("pair_weights", std::vector<std::vector<std::vector<double>>>{});
  spec.validate();
}

namespace {

double unit_from_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

std::string bench_name(const SearchSpaceDef &space, const SyntheticSpec &spec) {
  return spec.name.empty() ? space.space_id : spec.name;
}

}  // namespace

SyntheticBenchmark::SyntheticBenchmark(std::string id, SearchSpaceDef space, SyntheticSpec spec)
    : Benchmark(std::move(id), space, BackendKind::synthetic,
                {MetricInfo{spec.metric, Orientation::higher_better, spec.epochs}}, spec.seeds),
      spec_(std::move(spec)),
      cardinalities_(slot_cardinalities(space)) {
  spec_.validate();
  const std::size_t n = cardinalities_.size();
  Rng rng(spec_.seed);

  // Tables are always drawn so that the explicit-table path and the
  // ruggedness setting do not shift the other draws.
  slot_weights_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    slot_weights_[s].resize(static_cast<std::size_t>(cardinalities_[s]));
    for (auto &w : slot_weights_[s]) w = rng.uniform01();
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) pairs_.emplace_back(a, b);
  }
  pair_weights_.resize(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const auto ca = static_cast<std::size_t>(cardinalities_[pairs_[p].first]);
    const auto cb = static_cast<std::size_t>(cardinalities_[pairs_[p].second]);
    pair_weights_[p].assign(ca, std::vector<double>(cb));
    for (auto &row : pair_weights_[p]) {
      for (auto &w : row) w = rng.uniform01();
    }
  }
  op_costs_.resize(this->space().op_vocab.size());
  for (auto &c : op_costs_) c = rng.uniform(1.0, 10.0);

  if (!spec_.slot_weights.empty()) {
    if (spec_.slot_weights.size() != n) throw Error(ErrorCode::parameter, "slot_weights: wrong slot count");
    for (std::size_t s = 0; s < n; ++s) {
      if (spec_.slot_weights[s].size() != slot_weights_[s].size()) {
        throw Error(ErrorCode::parameter, "slot_weights: wrong cardinality");
      }
    }
    slot_weights_ = spec_.slot_weights;
  }
  if (!spec_.pair_weights.empty()) {
    if (spec_.pair_weights.size() != pairs_.size()) {
      throw Error(ErrorCode::parameter, "pair_weights: expected one table per slot pair");
    }
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      const auto &t = spec_.pair_weights[p];
      if (t.size() != pair_weights_[p].size()) throw Error(ErrorCode::parameter, "pair_weights: wrong shape");
      for (std::size_t a = 0; a < t.size(); ++a) {
        if (t[a].size() != pair_weights_[p][a].size()) {
          throw Error(ErrorCode::parameter, "pair_weights: wrong shape");
        }
      }
    }
    pair_weights_ = spec_.pair_weights;
  }
  if (!spec_.op_time_costs.empty()) {
    if (spec_.op_time_costs.size() != op_costs_.size()) {
      throw Error(ErrorCode::parameter, "op_time_costs: expected one cost per op");
    }
    op_costs_ = spec_.op_time_costs;
  }

  for (const auto &t : slot_weights_) {
    sep_min_ += *std::min_element(t.begin(), t.end());
    sep_max_ += *std::max_element(t.begin(), t.end());
  }
  for (const auto &t : pair_weights_) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &row : t) {
      for (double w : row) {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
    }
    pair_min_ += lo;
    pair_max_ += hi;
  }
}

double SyntheticBenchmark::fitness(const CellGraph &cell) const {
  if (spec_.iid) return unit_from_hash(hash_bytes(canonical_encode(cell, space()).str(), spec_.seed));
  const auto v = slot_values(cell);
  if (v.size() != cardinalities_.size()) {
    throw Error(ErrorCode::invalid_architecture, "cell does not match the benchmark space");
  }
  double sep = 0;
  for (std::size_t s = 0; s < v.size(); ++s) sep += slot_weights_[s][static_cast<std::size_t>(v[s])];
  double pair = 0;
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    pair += pair_weights_[p][static_cast<std::size_t>(v[pairs_[p].first])]
                            [static_cast<std::size_t>(v[pairs_[p].second])];
  }
  const double s_norm = sep_max_ > sep_min_ ? (sep - sep_min_) / (sep_max_ - sep_min_) : 0.0;
  const double p_norm = pair_max_ > pair_min_ ? (pair - pair_min_) / (pair_max_ - pair_min_) : 0.0;
  return (1.0 - spec_.ruggedness) * s_norm + spec_.ruggedness * p_norm;
}

double SyntheticBenchmark::fitness(const ArchId &arch) const {
  if (spec_.iid) {
    decode(arch.str(), space());
    return unit_from_hash(hash_bytes(arch.str(), spec_.seed));
  }
  return fitness(decode(arch.str(), space()));
}

double SyntheticBenchmark::train_time(const CellGraph &cell) const {
  double t = spec_.time_base;
  for (int op : cell.ops) t += op_costs_[static_cast<std::size_t>(op)];
  return t;
}

double SyntheticBenchmark::seed_value(const ArchId &arch, const CellGraph &cell, int seed) const {
  double f = spec_.iid ? unit_from_hash(hash_bytes(arch.str(), spec_.seed)) : fitness(cell);
  if (spec_.noise > 0) {
    Rng noise(hash_bytes(arch.str() + "#" + std::to_string(seed), spec_.seed ^ 0x6e6f697365ULL));
    f += spec_.noise * noise.normal();
  }
  return f;
}

double SyntheticBenchmark::query(const ArchId &arch, std::string_view metric_name,
                                 std::optional<int> epoch, SeedPolicy policy) const {
  const auto &m = metric(metric_name);
  const std::size_t e = epoch_index(m, epoch);
  const CellGraph cell = decode(arch.str(), space());
  double v = 0;
  switch (policy.kind) {
    case SeedPolicy::Kind::fixed:
      if (policy.seed < 0 || policy.seed >= seed_count()) {
        throw Error(ErrorCode::parameter, "seed index out of range");
      }
      v = seed_value(arch, cell, policy.seed);
      break;
    case SeedPolicy::Kind::random:
      if (policy.rng == nullptr) throw Error(ErrorCode::parameter, "random seed policy needs an rng");
      v = seed_value(arch, cell,
                     static_cast<int>(policy.rng->uniform_index(static_cast<std::uint64_t>(seed_count()))));
      break;
    case SeedPolicy::Kind::mean:
      if (spec_.noise == 0) {
        v = seed_value(arch, cell, 0);
      } else {
        for (int k = 0; k < seed_count(); ++k) v += seed_value(arch, cell, k);
        v /= seed_count();
      }
      break;
  }
  if (e + 1 == m.epochs.size()) return v;
  // Saturating learning curve scaled to reach v at the last epoch.
  const double last = m.epochs.back();
  auto shape = [last](double x) { return 1.0 - std::exp(-3.0 * x / last); };
  return v * shape(m.epochs[e]) / shape(last);
}

double SyntheticBenchmark::query_train_time(const ArchId &arch) const {
  return train_time(decode(arch.str(), space()));
}

std::unique_ptr<TabularBenchmark> tabulate(const SyntheticBenchmark &bench) {
  const auto size = space_size(bench.space());
  if (!size.exact || *size.exact > 1'000'000) {
    throw Error(ErrorCode::parameter, "space '" + bench.space().space_id +
                                          "' exceeds the 10^6-cell enumeration cap");
  }
  const auto &m = bench.default_metric();
  std::vector<MetricRecord> records;
  records.reserve(static_cast<std::size_t>(*size.exact));
  for_each_cell(bench.space(), [&](const CellGraph &cell) {
    MetricRecord r;
    r.arch = canonical_encode(cell, bench.space());
    std::vector<std::vector<double>> per_seed;
    for (int k = 0; k < bench.seed_count(); ++k) {
      std::vector<double> series;
      for (int e : m.epochs) series.push_back(bench.query(r.arch, m.name, e, SeedPolicy::fixed(k)));
      per_seed.push_back(std::move(series));
    }
    r.values.push_back(std::move(per_seed));
    r.train_time.assign(static_cast<std::size_t>(bench.seed_count()), bench.train_time(cell));
    records.push_back(std::move(r));
    return true;
  });
  nlohmann::json extra{{"bench_id", bench.id()}, {"generator", bench.spec()}};
  return std::make_unique<TabularBenchmark>(bench.id(), bench.space(), bench.metrics(),
                                            bench.seed_count(), std::move(records), std::move(extra));
}

std::unique_ptr<SyntheticBenchmark> gen_synthetic(const SearchSpaceDef &space,
                                                  const SyntheticSpec &spec,
                                                  const std::optional<std::string> &persist_path) {
  space.validate();
  auto bench = std::make_unique<SyntheticBenchmark>(bench_name(space, spec), space, spec);
  if (persist_path) save_tabular(*tabulate(*bench), *persist_path);
  return bench;
}

}  // namespace archbench
