#include "analysis/transfer.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "stats/rank.hpp"

namespace archbench {

double SweepResult::mean() const {
  if (scores.empty()) {
    throw Error(ErrorCode::degenerate, "no scores for " + method + " on " + bench + " config " +
                                           std::to_string(config_index));
  }
  double s = 0;
  for (double v : scores) s += v;
  return s / static_cast<double>(scores.size());
}

std::vector<std::string> SweepTable::spaces() const {
  std::vector<std::string> out;
  for (const auto &s : task_space) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> SweepTable::tasks_of(const std::string &space) const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < task_space.size(); ++t) {
    if (task_space[t] == space) out.push_back(t);
  }
  return out;
}

namespace {

const TaskInfo *find_task(const std::map<std::string, TaskInfo> &tasks, const std::string &name) {
  auto it = tasks.find(name);
  return it == tasks.end() ? nullptr : &it->second;
}

std::string space_of(const std::map<std::string, TaskInfo> &tasks, const std::string &name) {
  const auto *info = find_task(tasks, name);
  return info && !info->space.empty() ? info->space : name;
}

Orientation orientation_of(const std::map<std::string, TaskInfo> &tasks, const std::string &name) {
  const auto *info = find_task(tasks, name);
  return info ? info->orientation : Orientation::higher_better;
}

double oriented(double v, Orientation o) { return o == Orientation::higher_better ? v : -v; }

// Scaled config means of one task; a constant task scales to all ones.
std::vector<double> scaled_task(const SweepTable &table, std::size_t t) {
  const auto &m = table.means[t];
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  if (*lo == *hi) return std::vector<double>(m.size(), 1.0);
  return scale01(m, table.orientation[t]);
}

std::size_t argbest(const std::vector<double> &values, Orientation o) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < values.size(); ++c) {
    if (oriented(values[c], o) > oriented(values[best], o)) best = c;
  }
  return best;
}

struct Prepared {
  std::vector<std::string> spaces;
  std::vector<std::vector<std::size_t>> members;  // task indices per space
  std::vector<std::vector<double>> scaled;        // [task][config]
  std::vector<std::size_t> best;                  // per task
  std::vector<std::vector<double>> space_score;   // [space][config]
};

Prepared prepare(const SweepTable &table) {
  if (table.tasks.empty() || table.configs.empty()) {
    throw Error(ErrorCode::missing_cell, "empty sweep table");
  }
  Prepared p;
  p.spaces = table.spaces();
  for (const auto &s : p.spaces) p.members.push_back(table.tasks_of(s));
  for (std::size_t t = 0; t < table.tasks.size(); ++t) {
    if (table.means[t].size() != table.configs.size()) {
      throw Error(ErrorCode::missing_cell, "task '" + table.tasks[t] + "' lacks config means");
    }
    p.scaled.push_back(scaled_task(table, t));
    p.best.push_back(argbest(table.means[t], table.orientation[t]));
  }
  for (const auto &tasks : p.members) {
    std::vector<double> v(table.configs.size(), 0.0);
    for (std::size_t t : tasks) {
      for (std::size_t c = 0; c < v.size(); ++c) v[c] += p.scaled[t][c];
    }
    for (double &x : v) x /= static_cast<double>(tasks.size());
    p.space_score.push_back(std::move(v));
  }
  return p;
}

// Mean scaled regret over the tasks of space `s` when running config `c`.
double space_regret(const Prepared &p, std::size_t s, std::size_t c) {
  double sum = 0;
  for (std::size_t t : p.members[s]) sum += 1.0 - p.scaled[t][c];
  return sum / static_cast<double>(p.members[s].size());
}

}  // namespace

SweepTable make_sweep_table(const std::vector<SweepResult> &results,
                            const std::map<std::string, TaskInfo> &tasks,
                            const std::string &method) {
  SweepTable table;
  std::set<int> configs;
  std::map<std::pair<std::string, int>, double> cells;
  for (const auto &r : results) {
    if (!method.empty() && r.method != method) continue;
    if (std::find(table.tasks.begin(), table.tasks.end(), r.bench) == table.tasks.end()) {
      table.tasks.push_back(r.bench);
    }
    configs.insert(r.config_index);
    if (!cells.emplace(std::make_pair(r.bench, r.config_index), r.mean()).second) {
      throw Error(ErrorCode::duplicate_key, "repeated result for " + r.bench + " config " +
                                                std::to_string(r.config_index));
    }
  }
  table.configs.assign(configs.begin(), configs.end());
  for (const auto &task : table.tasks) {
    table.task_space.push_back(space_of(tasks, task));
    table.orientation.push_back(orientation_of(tasks, task));
    std::vector<double> row;
    for (int c : table.configs) {
      auto it = cells.find({task, c});
      if (it == cells.end()) {
        throw Error(ErrorCode::missing_cell, "no result for " + task + " config " + std::to_string(c));
      }
      row.push_back(it->second);
    }
    table.means.push_back(std::move(row));
  }
  return table;
}

std::vector<double> scale01(std::span<const double> values, Orientation orientation) {
  if (values.empty()) throw Error(ErrorCode::degenerate, "nothing to scale");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) throw Error(ErrorCode::degenerate, "all values are equal");
  const double range = *hi - *lo;
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    out.push_back(orientation == Orientation::higher_better ? (v - *lo) / range : (*hi - v) / range);
  }
  return out;
}

Matrix regret_matrix(const SweepTable &table) {
  const auto p = prepare(table);
  const std::size_t n = p.spaces.size();
  Matrix m{p.spaces, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0;
      for (std::size_t ti : p.members[i]) {
        for (std::size_t tj : p.members[j]) sum += 1.0 - p.scaled[tj][p.best[ti]];
      }
      m.values[i][j] = sum / static_cast<double>(p.members[i].size() * p.members[j].size());
    }
  }
  return m;
}

Matrix kendall_matrix(const SweepTable &table) {
  const auto p = prepare(table);
  const std::size_t n = p.spaces.size();
  Matrix m{p.spaces, std::vector<std::vector<double>>(n, std::vector<double>(n, 1.0))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double tau = kendall_tau_b(p.space_score[i], p.space_score[j]);
      m.values[i][j] = m.values[j][i] = tau;
    }
  }
  return m;
}

std::vector<LooRow> leave_one_out(const SweepTable &table) {
  const auto p = prepare(table);
  const std::size_t n = p.spaces.size();
  if (n < 2) throw Error(ErrorCode::parameter, "leave-one-out needs at least two spaces");
  const std::size_t nc = table.configs.size();
  std::vector<LooRow> rows;
  for (std::size_t a = 0; a < n; ++a) {
    LooRow row;
    row.space = p.spaces[a];
    std::vector<double> others(nc, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      if (s == a) continue;
      for (std::size_t c = 0; c < nc; ++c) others[c] += p.space_score[s][c];
    }
    row.transferred = argbest(others, Orientation::higher_better);
    row.own_best = argbest(p.space_score[a], Orientation::higher_better);
    row.transfer_to = space_regret(p, a, row.transferred);
    double from = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (s != a) from += space_regret(p, s, row.own_best);
    }
    row.transfer_from = from / static_cast<double>(n - 1);
    rows.push_back(std::move(row));
  }
  return rows;
}

RankTable avg_rank_table(const std::map<std::string, std::map<std::string, double>> &scores,
                         const std::map<std::string, TaskInfo> &tasks,
                         const std::vector<std::string> &only_spaces) {
  RankTable out;
  if (scores.empty()) throw Error(ErrorCode::missing_cell, "no methods to rank");
  std::set<std::string> task_set;
  for (const auto &[method, per_task] : scores) {
    out.methods.push_back(method);
    for (const auto &[task, v] : per_task) task_set.insert(task);
  }
  std::map<std::string, int> space_tasks;
  std::vector<std::string> used;
  for (const auto &task : task_set) {
    const auto space = space_of(tasks, task);
    if (!only_spaces.empty() &&
        std::find(only_spaces.begin(), only_spaces.end(), space) == only_spaces.end()) {
      continue;
    }
    ++space_tasks[space];
    used.push_back(task);
  }
  if (used.empty()) throw Error(ErrorCode::missing_cell, "no tasks to rank on");

  out.avg_rank.assign(out.methods.size(), 0.0);
  double total_weight = 0;
  for (const auto &task : used) {
    const auto o = orientation_of(tasks, task);
    std::vector<double> keyed;
    for (const auto &method : out.methods) {
      const auto &per_task = scores.at(method);
      auto it = per_task.find(task);
      if (it == per_task.end()) {
        throw Error(ErrorCode::missing_cell, "no score for " + method + " on " + task);
      }
      keyed.push_back(-oriented(it->second, o));
    }
    const auto ranks = average_ranks(keyed);
    const double w = 1.0 / space_tasks[space_of(tasks, task)];
    for (std::size_t k = 0; k < ranks.size(); ++k) out.avg_rank[k] += w * ranks[k];
    total_weight += w;
  }
  for (double &r : out.avg_rank) r /= total_weight;
  return out;
}

std::vector<InsightCell> rank_correlation_insights(
    const std::map<std::string, std::vector<double>> &ranks,
    const std::map<std::string, std::vector<double>> &properties) {
  std::vector<InsightCell> out;
  for (const auto &[method, r] : ranks) {
    for (const auto &[property, values] : properties) {
      if (values.size() != r.size()) {
        throw Error(ErrorCode::parameter, "property '" + property + "' is not aligned with the ranks of " +
                                              method);
      }
      out.push_back({method, property, kendall_tau_b(r, values)});
    }
  }
  return out;
}

}  // namespace archbench
