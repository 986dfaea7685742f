#include "optim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "graph/neighborhood.hpp"

namespace archbench {

const char *optimizer_kind_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::rs: return "rs";
    case OptimizerKind::re: return "re";
    case OptimizerKind::ls: return "ls";
    case OptimizerKind::bananas: return "bananas";
    case OptimizerKind::npenas: return "npenas";
  }
  return "?";
}

OptimizerKind parse_optimizer_kind(const std::string &text) {
  for (auto k : {OptimizerKind::rs, OptimizerKind::re, OptimizerKind::ls, OptimizerKind::bananas,
                 OptimizerKind::npenas}) {
    if (text == optimizer_kind_name(k)) return k;
  }
  throw Error(ErrorCode::parameter, "unknown optimizer '" + text + "'");
}

void OptimizerConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw Error(ErrorCode::parameter, what);
  };
  require(budget >= 1, "budget must be >= 1");
  require(re.sample >= 1 && re.population >= re.sample, "re needs population >= sample >= 1");
  require(bananas.n_init >= 1, "bananas n_init must be >= 1");
  require(bananas.ensemble_size >= 1, "bananas ensemble_size must be >= 1");
  require(bananas.candidates_per_iter >= 1, "bananas candidates_per_iter must be >= 1");
  require(bananas.top_k >= 1, "bananas top_k must be >= 1");
  require(bananas.ucb_beta >= 0 && std::isfinite(bananas.ucb_beta), "bananas ucb_beta must be >= 0");
  require(npenas.n_init >= 1, "npenas n_init must be >= 1");
  require(npenas.parents >= 1, "npenas parents must be >= 1");
  require(npenas.children >= 1, "npenas children must be >= 1");
  bananas.predictor.validate();
  npenas.predictor.validate();
}

void to_json(nlohmann::json &j, const OptimizerConfig &cfg) {
  j = nlohmann::json{{"kind", optimizer_kind_name(cfg.kind)}, {"budget", cfg.budget}};
  if (!cfg.metric.empty()) j["metric"] = cfg.metric;
  switch (cfg.kind) {
    case OptimizerKind::rs: break;
    case OptimizerKind::re:
      j["population"] = cfg.re.population;
      j["sample"] = cfg.re.sample;
      break;
    case OptimizerKind::ls: j["restart_on_optimum"] = cfg.ls.restart_on_optimum; break;
    case OptimizerKind::bananas:
      j["n_init"] = cfg.bananas.n_init;
      j["ensemble_size"] = cfg.bananas.ensemble_size;
      j["candidates_per_iter"] = cfg.bananas.candidates_per_iter;
      j["top_k"] = cfg.bananas.top_k;
      j["acquisition"] = cfg.bananas.acquisition == Acquisition::its ? "its" : "ucb";
      j["ucb_beta"] = cfg.bananas.ucb_beta;
      j["predictor"] = cfg.bananas.predictor;
      break;
    case OptimizerKind::npenas:
      j["n_init"] = cfg.npenas.n_init;
      j["parents"] = cfg.npenas.parents;
      j["children"] = cfg.npenas.children;
      j["predictor"] = cfg.npenas.predictor;
      break;
  }
}

void from_json(const nlohmann::json &j, OptimizerConfig &cfg) {
  cfg = OptimizerConfig{};
  cfg.kind = parse_optimizer_kind(j.at("kind").get<std::string>());
  cfg.budget = j.value("budget", cfg.budget);
  cfg.metric = j.value("metric", std::string());
  switch (cfg.kind) {
    case OptimizerKind::rs: break;
    case OptimizerKind::re:
      cfg.re.population = j.value("population", cfg.re.population);
      cfg.re.sample = j.value("sample", cfg.re.sample);
      break;
    case OptimizerKind::ls:
      cfg.ls.restart_on_optimum = j.value("restart_on_optimum", cfg.ls.restart_on_optimum);
      break;
    case OptimizerKind::bananas: {
      auto &b = cfg.bananas;
      b.n_init = j.value("n_init", b.n_init);
      b.ensemble_size = j.value("ensemble_size", b.ensemble_size);
      b.candidates_per_iter = j.value("candidates_per_iter", b.candidates_per_iter);
      b.top_k = j.value("top_k", b.top_k);
      const auto acq = j.value("acquisition", std::string("its"));
      if (acq != "its" && acq != "ucb") throw Error(ErrorCode::parameter, "unknown acquisition '" + acq + "'");
      b.acquisition = acq == "its" ? Acquisition::its : Acquisition::ucb;
      b.ucb_beta = j.value("ucb_beta", b.ucb_beta);
      if (j.contains("predictor")) b.predictor = j.at("predictor").get<PredictorConfig>();
      break;
    }
    case OptimizerKind::npenas: {
      auto &n = cfg.npenas;
      n.n_init = j.value("n_init", n.n_init);
      n.parents = j.value("parents", n.parents);
      n.children = j.value("children", n.children);
      if (j.contains("predictor")) n.predictor = j.at("predictor").get<PredictorConfig>();
      break;
    }
  }
  cfg.validate();
}

std::string config_digest(const OptimizerConfig &cfg) {
  return hex64(hash_bytes(nlohmann::json(cfg).dump()));
}

std::optional<double> Trajectory::final_incumbent() const {
  if (incumbent.empty()) return std::nullopt;
  return incumbent.back();
}

const Step *Trajectory::best_step() const {
  const Step *best = nullptr;
  for (const auto &s : steps) {
    if (best == nullptr ||
        (orientation == Orientation::higher_better ? s.value > best->value : s.value < best->value)) {
      best = &s;
    }
  }
  return best;
}

void to_json(nlohmann::json &j, const Trajectory &t) {
  auto steps = nlohmann::json::array();
  for (const auto &s : t.steps) {
    steps.push_back({{"i", s.index}, {"arch", s.arch.str()}, {"value", s.value},
                     {"t", s.train_seconds}, {"cum", s.cumulative_seconds}});
  }
  auto optima = nlohmann::json::array();
  for (const auto &a : t.local_optima) optima.push_back(a.str());
  j = nlohmann::json{{"bench", t.bench},
                     {"config_digest", t.config_digest},
                     {"seed", t.seed},
                     {"orientation", orientation_name(t.orientation)},
                     {"status", t.status},
                     {"fallbacks", t.fallbacks},
                     {"steps", std::move(steps)},
                     {"incumbent", t.incumbent},
                     {"local_optima", std::move(optima)}};
}

namespace {

constexpr int kMaxAttempts = 100;

// Architectures a benchmark can answer: the stored ids of tabular
// benchmarks, otherwise every valid cell of the space.
class Universe {
 public:
  explicit Universe(const Benchmark &bench) : space_(bench.space()) {
    if (auto ids = bench.stored_ids()) {
      stored_ = std::move(*ids);
      for (const auto &id : *stored_) members_.insert(id.str());
    } else {
      size_ = space_size(space_).exact;
    }
  }

  std::optional<std::uint64_t> size() const {
    return stored_ ? std::optional<std::uint64_t>(stored_->size()) : size_;
  }

  bool contains(const ArchId &id) const { return !stored_ || members_.contains(id.str()); }

  ArchId random(Rng &rng) const {
    if (stored_) return (*stored_)[rng.uniform_index(stored_->size())];
    return canonical_encode(sample_uniform(space_, rng), space_);
  }

  std::vector<ArchId> neighbors(const ArchId &id) const {
    std::vector<ArchId> out;
    for (const auto &c : archbench::neighbors(decode(id.str(), space_), space_)) {
      ArchId n = canonical_encode(c, space_);
      if (contains(n)) out.push_back(std::move(n));
    }
    return out;
  }

  std::vector<ArchId> all() const {
    if (stored_) return *stored_;
    if (!size_ || *size_ > 10'000'000) {
      throw Error(ErrorCode::parameter, "space '" + space_.space_id + "' is too large to enumerate");
    }
    std::vector<ArchId> out;
    out.reserve(static_cast<std::size_t>(*size_));
    for_each_cell(space_, [&](const CellGraph &c) {
      out.push_back(canonical_encode(c, space_));
      return true;
    });
    return out;
  }

  const SearchSpaceDef &space() const { return space_; }

 private:
  const SearchSpaceDef &space_;
  std::optional<std::vector<ArchId>> stored_;
  std::unordered_set<std::string> members_;
  std::optional<std::uint64_t> size_;
};

struct Exhausted {};

class Search {
 public:
  Search(const OptimizerConfig &cfg, const Benchmark &bench, std::uint64_t seed)
      : cfg_(cfg), bench_(bench), universe_(bench), rng_(seed) {
    const auto &m = cfg.metric.empty() ? bench.default_metric() : bench.metric(cfg.metric);
    metric_ = m.name;
    sign_ = m.orientation == Orientation::higher_better ? 1.0 : -1.0;
    budget_ = static_cast<std::size_t>(cfg.budget);
    if (auto n = universe_.size()) budget_ = std::min<std::size_t>(budget_, static_cast<std::size_t>(*n));
    traj_.orientation = m.orientation;
    traj_.bench = bench.id();
    traj_.config_digest = config_digest(cfg);
    traj_.seed = seed;
  }

  Trajectory run() {
    try {
      switch (cfg_.kind) {
        case OptimizerKind::rs: run_rs(); break;
        case OptimizerKind::re: run_re(); break;
        case OptimizerKind::ls: run_ls(); break;
        case OptimizerKind::bananas: run_bananas(); break;
        case OptimizerKind::npenas: run_npenas(); break;
      }
    } catch (const Exhausted &) {
      traj_.status = "exhausted";
    } catch (const Error &e) {
      if (e.code() != ErrorCode::no_neighbor) throw;
      traj_.status = "no_neighbor";
    }
    return std::move(traj_);
  }

 private:
  bool done() const { return traj_.steps.size() >= budget_; }
  bool queried(const ArchId &id) const { return scores_.contains(id.str()); }
  double score(const ArchId &id) const { return scores_.at(id.str()); }

  double evaluate(const ArchId &id) {
    const double raw = bench_.query(id, metric_);
    double t = 0.0;
    try {
      t = bench_.query_train_time(id);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::missing_arch) throw;
    }
    Step s;
    s.index = static_cast<int>(traj_.steps.size());
    s.arch = id;
    s.value = raw;
    s.train_seconds = t;
    s.cumulative_seconds = (traj_.steps.empty() ? 0.0 : traj_.steps.back().cumulative_seconds) + t;
    const double internal = sign_ * raw;
    if (traj_.incumbent.empty() || internal > sign_ * traj_.incumbent.back()) {
      traj_.incumbent.push_back(raw);
    } else {
      traj_.incumbent.push_back(traj_.incumbent.back());
    }
    traj_.steps.push_back(std::move(s));
    scores_.emplace(id.str(), internal);
    evaluated_.push_back(id);
    return internal;
  }

  // Unqueried uniform draw; rejection first, then the explicit pool.
  ArchId fresh() {
    for (int a = 0; a < kMaxAttempts; ++a) {
      ArchId id = universe_.random(rng_);
      if (!queried(id)) return id;
    }
    if (!pool_) pool_ = universe_.all();
    while (!pool_->empty()) {
      const std::size_t i = rng_.uniform_index(pool_->size());
      if (!queried((*pool_)[i])) return (*pool_)[i];
      std::swap((*pool_)[i], pool_->back());
      pool_->pop_back();
    }
    throw Exhausted{};
  }

  const std::vector<ArchId> &neighbors_of(const ArchId &id) {
    auto it = neighbor_cache_.find(id.str());
    if (it == neighbor_cache_.end()) it = neighbor_cache_.emplace(id.str(), universe_.neighbors(id)).first;
    return it->second;
  }

  ArchId mutate_fresh(const ArchId &parent) {
    const auto &nbrs = neighbors_of(parent);
    if (nbrs.empty()) {
      throw Error(ErrorCode::no_neighbor, "architecture has no neighbors: " + parent.str());
    }
    for (int a = 0; a < kMaxAttempts; ++a) {
      const auto &c = nbrs[rng_.uniform_index(nbrs.size())];
      if (!queried(c)) return c;
    }
    return fresh();
  }

  const std::vector<double> &features(const ArchId &id) {
    auto it = features_.find(id.str());
    if (it == features_.end()) {
      it = features_.emplace(id.str(), encode_onehot(decode(id.str(), universe_.space()),
                                                     universe_.space())).first;
    }
    return it->second;
  }

  void initial_random(int n) {
    for (int i = 0; i < n && !done(); ++i) evaluate(fresh());
  }

  void run_rs() {
    while (!done()) evaluate(fresh());
  }

  void run_re() {
    std::deque<ArchId> population;
    for (int i = 0; i < cfg_.re.population && !done(); ++i) {
      ArchId id = fresh();
      evaluate(id);
      population.push_back(std::move(id));
    }
    const auto sample = static_cast<std::size_t>(cfg_.re.sample);
    while (!done()) {
      const auto picks = rng_.sample_without_replacement(population.size(),
                                                         std::min(sample, population.size()));
      std::size_t best = picks.front();
      for (std::size_t p : picks) {
        if (score(population[p]) > score(population[best])) best = p;
      }
      ArchId child = mutate_fresh(population[best]);
      evaluate(child);
      population.push_back(std::move(child));
      if (population.size() > static_cast<std::size_t>(cfg_.re.population)) population.pop_front();
    }
  }

  std::vector<ArchId> pending_neighbors(const ArchId &center) {
    std::vector<ArchId> out;
    for (const auto &n : neighbors_of(center)) {
      if (!queried(n)) out.push_back(n);
    }
    rng_.shuffle(out);
    return out;
  }

  void run_ls() {
    std::optional<ArchId> center;
    std::vector<ArchId> pending;
    while (!done()) {
      if (!center) {
        center = fresh();
        evaluate(*center);
        pending = pending_neighbors(*center);
        continue;
      }
      if (pending.empty()) {
        // Full neighborhood known: move to the best strictly better neighbor.
        const ArchId *best = nullptr;
        for (const auto &n : neighbors_of(*center)) {
          if (score(n) > score(*center) && (best == nullptr || score(n) > score(*best))) best = &n;
        }
        if (best != nullptr) {
          center = *best;
          pending = pending_neighbors(*center);
          continue;
        }
        traj_.local_optima.push_back(*center);
        if (!cfg_.ls.restart_on_optimum) return;
        center.reset();
        continue;
      }
      ArchId next = std::move(pending.back());
      pending.pop_back();
      if (!queried(next)) evaluate(next);
    }
  }

  std::vector<ArchId> top_evaluated(std::size_t k) const {
    std::vector<ArchId> order = evaluated_;
    std::stable_sort(order.begin(), order.end(),
                     [&](const ArchId &a, const ArchId &b) { return score(a) > score(b); });
    order.resize(std::min(k, order.size()));
    return order;
  }

  std::vector<ArchId> bananas_candidates() {
    const auto parents = top_evaluated(static_cast<std::size_t>(cfg_.bananas.top_k));
    const auto want = static_cast<std::size_t>(cfg_.bananas.candidates_per_iter);
    std::vector<ArchId> out;
    std::unordered_set<std::string> seen;
    for (std::size_t a = 0; out.size() < want && a < want * 10; ++a) {
      const auto &nbrs = neighbors_of(parents[a % parents.size()]);
      if (nbrs.empty()) continue;
      const auto &c = nbrs[rng_.uniform_index(nbrs.size())];
      if (!queried(c) && seen.insert(c.str()).second) out.push_back(c);
    }
    return out;
  }

  FittedPredictor fit_on(const PredictorConfig &pc, const std::vector<std::size_t> &rows, Rng &rng) {
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    x.reserve(rows.size());
    for (std::size_t r : rows) {
      x.push_back(features(evaluated_[r]));
      y.push_back(score(evaluated_[r]));
    }
    return FittedPredictor::fit(pc, x, y, rng);
  }

  std::vector<std::vector<double>> candidate_features(const std::vector<ArchId> &cands) {
    std::vector<std::vector<double>> x;
    x.reserve(cands.size());
    for (const auto &c : cands) x.push_back(features(c));
    return x;
  }

  void run_bananas() {
    const auto &b = cfg_.bananas;
    initial_random(b.n_init);
    while (!done()) {
      const auto cands = bananas_candidates();
      if (cands.empty()) {
        evaluate(fresh());
        continue;
      }
      const std::size_t n = evaluated_.size();
      std::vector<std::vector<Prediction>> member_preds;
      try {
        const auto x = candidate_features(cands);
        for (int m = 0; m < b.ensemble_size; ++m) {
          Rng member_rng(rng_.fork_seed());
          std::vector<std::size_t> rows(n);
          if (b.ensemble_size == 1) {
            for (std::size_t i = 0; i < n; ++i) rows[i] = i;
          } else {
            for (auto &r : rows) r = member_rng.uniform_index(n);
          }
          member_preds.push_back(fit_on(b.predictor, rows, member_rng).predict_with_uncertainty(x));
        }
      } catch (const Error &e) {
        if (e.code() != ErrorCode::numeric && e.code() != ErrorCode::parameter) throw;
        ++traj_.fallbacks;
        evaluate(fresh());
        continue;
      }
      std::size_t best = 0;
      double best_value = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < cands.size(); ++c) {
        double v;
        if (b.acquisition == Acquisition::its) {
          v = member_preds[rng_.uniform_index(member_preds.size())][c].mean;
        } else {
          double mean = 0, sq = 0;
          for (const auto &mp : member_preds) {
            mean += mp[c].mean;
            sq += mp[c].mean * mp[c].mean;
          }
          const double e = static_cast<double>(member_preds.size());
          mean /= e;
          const double spread = member_preds.size() == 1 ? member_preds[0][c].spread
                                                         : std::sqrt(std::max(0.0, sq / e - mean * mean));
          v = mean + b.ucb_beta * spread;
        }
        if (v > best_value) {
          best_value = v;
          best = c;
        }
      }
      evaluate(cands[best]);
    }
  }

  void run_npenas() {
    const auto &p = cfg_.npenas;
    initial_random(p.n_init);
    while (!done()) {
      const std::size_t n = evaluated_.size();
      const auto parents =
          rng_.sample_without_replacement(n, std::min(n, static_cast<std::size_t>(p.parents)));
      std::vector<ArchId> cands;
      std::unordered_set<std::string> seen;
      for (std::size_t parent : parents) {
        const auto &nbrs = neighbors_of(evaluated_[parent]);
        if (nbrs.empty()) continue;
        int made = 0;
        for (int a = 0; a < kMaxAttempts && made < p.children; ++a) {
          const auto &c = nbrs[rng_.uniform_index(nbrs.size())];
          if (!queried(c) && seen.insert(c.str()).second) {
            cands.push_back(c);
            ++made;
          }
        }
      }
      if (cands.empty()) {
        evaluate(fresh());
        continue;
      }
      std::vector<double> pred;
      try {
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
        Rng fit_rng(rng_.fork_seed());
        pred = fit_on(p.predictor, rows, fit_rng).predict(candidate_features(cands));
      } catch (const Error &e) {
        if (e.code() != ErrorCode::numeric && e.code() != ErrorCode::parameter) throw;
        ++traj_.fallbacks;
        evaluate(fresh());
        continue;
      }
      const auto best = static_cast<std::size_t>(std::max_element(pred.begin(), pred.end()) - pred.begin());
      evaluate(cands[best]);
    }
  }

  const OptimizerConfig &cfg_;
  const Benchmark &bench_;
  Universe universe_;
  Rng rng_;
  std::string metric_;
  double sign_ = 1.0;
  std::size_t budget_ = 0;
  Trajectory traj_;
  std::unordered_map<std::string, double> scores_;
  std::vector<ArchId> evaluated_;
  std::unordered_map<std::string, std::vector<ArchId>> neighbor_cache_;
  std::unordered_map<std::string, std::vector<double>> features_;
  std::optional<std::vector<ArchId>> pool_;
};

}  // namespace

Trajectory run_optimizer(const OptimizerConfig &cfg, const Benchmark &bench, std::uint64_t seed) {
  cfg.validate();
  return Search(cfg, bench, seed).run();
}

double bench_optimum(const Benchmark &bench, const std::string &metric) {
  const auto &m = metric.empty() ? bench.default_metric() : bench.metric(metric);
  const double sign = m.orientation == Orientation::higher_better ? 1.0 : -1.0;
  const auto ids = Universe(bench).all();
  if (ids.empty()) throw Error(ErrorCode::parameter, "benchmark has no architectures");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto &id : ids) best = std::max(best, sign * bench.query(id, m.name));
  return sign * best;
}

double incumbent_regret(const Trajectory &t, double optimum, std::optional<std::size_t> prefix) {
  if (t.incumbent.empty()) throw Error(ErrorCode::parameter, "empty trajectory");
  const std::size_t k = prefix ? *prefix : t.incumbent.size();
  if (k == 0 || k > t.incumbent.size()) throw Error(ErrorCode::parameter, "prefix out of range");
  const double inc = t.incumbent[k - 1];
  const double gap = t.orientation == Orientation::higher_better ? optimum - inc : inc - optimum;
  if (gap < -1e-12 * std::max(1.0, std::abs(optimum))) {
    throw Error(ErrorCode::parameter, "incumbent beats the stated optimum");
  }
  return std::max(0.0, gap);
}

}  // namespace archbench
