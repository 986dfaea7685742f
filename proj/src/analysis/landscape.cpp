#include "analysis/landscape.hpp"

#include <algorithm>
#include <unordered_set>

#include "catalog/catalog.hpp"
#include "common/error.hpp"
#include "graph/neighborhood.hpp"
#include "predict/evaluate.hpp"
#include "stats/descriptive.hpp"

namespace archbench {

DistributionStats describe(std::span<const double> values, bool exhaustive) {
  if (values.empty()) throw Error(ErrorCode::degenerate, "empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  DistributionStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.iqr = s.q3 - s.q1;
  s.mean = mean(sorted);
  s.stddev = stddev(sorted);
  s.sample_size = sorted.size();
  s.exhaustive = exhaustive;
  return s;
}

ArchSample sample_architectures(const Benchmark &bench, std::size_t sample_cap, Rng &rng) {
  if (sample_cap < 2) throw Error(ErrorCode::parameter, "sample_cap must be at least 2");
  ArchSample out;
  if (auto stored = bench.stored_ids()) {
    if (stored->empty()) throw Error(ErrorCode::degenerate, "benchmark stores no architectures");
    if (stored->size() <= sample_cap) {
      out.ids = std::move(*stored);
      out.exhaustive = true;
      return out;
    }
    return {sample_distinct(bench, sample_cap, rng), false};
  }
  const auto size = space_size(bench.space());
  if (size.exact && *size.exact <= sample_cap) {
    out.ids.reserve(static_cast<std::size_t>(*size.exact));
    for_each_cell(bench.space(), [&](const CellGraph &c) {
      out.ids.push_back(canonical_encode(c, bench.space()));
      return true;
    });
    if (out.ids.empty()) throw Error(ErrorCode::degenerate, "space has no valid architectures");
    out.exhaustive = true;
    return out;
  }
  return {sample_distinct(bench, sample_cap, rng), false};
}

namespace {

std::vector<double> values_of(const Benchmark &bench, const std::vector<ArchId> &ids,
                              const std::string &metric) {
  const auto &m = metric.empty() ? bench.default_metric() : bench.metric(metric);
  std::vector<double> v;
  v.reserve(ids.size());
  for (const auto &id : ids) v.push_back(bench.query(id, m.name));
  return v;
}

}  // namespace

DistributionStats distribution_stats(const Benchmark &bench, std::size_t sample_cap, Rng &rng,
                                     const std::string &metric) {
  const auto sample = sample_architectures(bench, sample_cap, rng);
  return describe(values_of(bench, sample.ids, metric), sample.exhaustive);
}

std::vector<double> autocorrelation(std::span<const double> series, int max_lag) {
  if (max_lag < 1 || series.size() <= static_cast<std::size_t>(max_lag)) {
    throw Error(ErrorCode::parameter, "autocorrelation needs walk length > max lag >= 1");
  }
  const double m = mean(series);
  double denom = 0;
  for (double a : series) denom += (a - m) * (a - m);
  if (denom == 0) throw Error(ErrorCode::degenerate, "constant series has no autocorrelation");
  std::vector<double> rho(static_cast<std::size_t>(max_lag));
  for (int k = 1; k <= max_lag; ++k) {
    double num = 0;
    for (std::size_t t = 0; t + k < series.size(); ++t) num += (series[t] - m) * (series[t + k] - m);
    rho[k - 1] = num / denom;
  }
  return rho;
}

std::vector<double> rwa(const Benchmark &bench, int walk_len, int max_lag, int n_walks, Rng &rng,
                        const std::string &metric) {
  if (n_walks < 1) throw Error(ErrorCode::parameter, "n_walks must be positive");
  if (max_lag < 1 || walk_len <= max_lag) {
    throw Error(ErrorCode::parameter, "rwa needs walk length > max lag >= 1");
  }
  const auto &space = bench.space();
  const auto &m = metric.empty() ? bench.default_metric() : bench.metric(metric);
  const auto stored = bench.stored_ids();
  std::unordered_set<ArchId> members;
  if (stored) {
    if (stored->empty()) throw Error(ErrorCode::degenerate, "benchmark stores no architectures");
    members.insert(stored->begin(), stored->end());
  }

  std::vector<double> total(static_cast<std::size_t>(max_lag), 0.0);
  std::vector<double> series(static_cast<std::size_t>(walk_len));
  for (int w = 0; w < n_walks; ++w) {
    ArchId id = stored ? (*stored)[rng.uniform_index(stored->size())]
                       : canonical_encode(sample_uniform(space, rng), space);
    CellGraph cell = decode(id.str(), space);
    for (int t = 0; t < walk_len; ++t) {
      series[t] = bench.query(id, m.name);
      if (t + 1 == walk_len) break;
      if (!stored) {
        cell = mutate(cell, space, rng);
        id = canonical_encode(cell, space);
        continue;
      }
      std::vector<std::pair<CellGraph, ArchId>> options;
      for (auto &c : neighbors(cell, space)) {
        ArchId n = canonical_encode(c, space);
        if (members.contains(n)) options.emplace_back(std::move(c), std::move(n));
      }
      if (options.empty()) throw Error(ErrorCode::no_neighbor, "walk reached an isolated architecture");
      auto &pick = options[rng.uniform_index(options.size())];
      cell = std::move(pick.first);
      id = std::move(pick.second);
    }
    const auto rho = autocorrelation(series, max_lag);
    for (int k = 0; k < max_lag; ++k) total[k] += rho[k];
  }
  for (double &r : total) r /= n_walks;
  return total;
}

double avg_neighborhood_size(const SearchSpaceDef &space, std::size_t sample_cap, Rng &rng) {
  if (sample_cap < 1) throw Error(ErrorCode::parameter, "sample_cap must be positive");
  double sum = 0;
  std::size_t n = 0;
  const auto size = space_size(space);
  if (size.exact && *size.exact <= sample_cap) {
    for_each_cell(space, [&](const CellGraph &c) {
      sum += static_cast<double>(neighbors(c, space).size());
      ++n;
      return true;
    });
  } else {
    for (; n < sample_cap; ++n) sum += static_cast<double>(neighbors(sample_uniform(space, rng), space).size());
  }
  if (n == 0) throw Error(ErrorCode::degenerate, "space has no valid architectures");
  return sum / static_cast<double>(n);
}

double avg_train_time(const Benchmark &bench, std::size_t sample_cap, Rng &rng) {
  const auto sample = sample_architectures(bench, std::max<std::size_t>(sample_cap, 2), rng);
  double sum = 0;
  for (const auto &id : sample.ids) sum += bench.query_train_time(id);
  return sum / static_cast<double>(sample.ids.size());
}

std::vector<IqrPoint> iqr_vs_num_ops(const Benchmark &bench, const std::vector<int> &op_counts,
                                     std::size_t sample_cap, Rng &rng, const std::string &metric) {
  if (sample_cap < 2) throw Error(ErrorCode::parameter, "sample_cap must be at least 2");
  const auto &space = bench.space();
  const int vocab = static_cast<int>(space.op_vocab.size());
  const auto stored = bench.stored_ids();
  std::vector<IqrPoint> out;
  for (int q : op_counts) {
    if (q < 1 || q > vocab) {
      throw Error(ErrorCode::parameter, "op count " + std::to_string(q) + " outside [1, " +
                                            std::to_string(vocab) + "]");
    }
    auto within = [q](const CellGraph &c) {
      return std::all_of(c.ops.begin(), c.ops.end(), [q](int op) { return op < q; });
    };
    std::vector<ArchId> ids;
    bool exhaustive = false;
    if (stored) {
      for (const auto &id : *stored) {
        if (within(decode(id.str(), space))) ids.push_back(id);
      }
      if (ids.size() > sample_cap) {
        std::vector<ArchId> picked;
        for (std::size_t i : rng.sample_without_replacement(ids.size(), sample_cap)) picked.push_back(ids[i]);
        ids = std::move(picked);
      } else {
        exhaustive = true;
      }
    } else {
      SearchSpaceDef sub = space;
      sub.op_vocab.resize(static_cast<std::size_t>(q));
      const auto size = space_size(sub);
      if (size.exact && *size.exact <= sample_cap) {
        for_each_cell(sub, [&](const CellGraph &c) {
          ids.push_back(canonical_encode(c, space));
          return true;
        });
        exhaustive = true;
      } else {
        std::unordered_set<ArchId> seen;
        while (ids.size() < sample_cap) {
          ArchId id = canonical_encode(sample_uniform(sub, rng), space);
          if (seen.insert(id).second) ids.push_back(std::move(id));
        }
      }
    }
    if (ids.empty()) {
      throw Error(ErrorCode::degenerate, "no architectures with " + std::to_string(q) + " ops");
    }
    out.push_back({q, describe(values_of(bench, ids, metric), exhaustive)});
  }
  return out;
}

}  // namespace archbench
