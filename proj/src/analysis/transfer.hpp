#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catalog/catalog.hpp"

namespace archbench {

/// Per-seed scores of one configuration of one method on one benchmark.
struct SweepResult {
  std::string method;
  std::string bench;
  int config_index = 0;
  std::vector<double> scores;
  std::vector<std::uint64_t> seeds;

  /// Mean over the declared seeds; throws Error(degenerate) when empty.
  double mean() const;
};

/// Config means of one method arranged as [task][config]. Tasks are
/// grouped into search spaces; a space with several tasks is averaged into
/// one row or column of the matrices below.
struct SweepTable {
  std::vector<std::string> tasks;
  std::vector<std::string> task_space;  // space name per task
  std::vector<Orientation> orientation;  // per task
  std::vector<int> configs;              // config indices, ascending
  std::vector<std::vector<double>> means;

  /// Space names in first-appearance order.
  std::vector<std::string> spaces() const;
  std::vector<std::size_t> tasks_of(const std::string &space) const;
};

struct TaskInfo {
  std::string space;  // empty: the task is its own space
  Orientation orientation = Orientation::higher_better;
};

/// Collects the results of `method` (all methods when empty). Tasks appear
/// in first-appearance order. Throws Error(missing_cell) when some
/// (benchmark, config) pair has no result and Error(duplicate_key) when one
/// appears twice.
SweepTable make_sweep_table(const std::vector<SweepResult> &results,
                            const std::map<std::string, TaskInfo> &tasks = {},
                            const std::string &method = {});

/// (v - min) / (max - min), flipped for lower-better values so 1 is best.
/// Throws Error(degenerate) when all values are equal.
std::vector<double> scale01(std::span<const double> values,
                            Orientation orientation = Orientation::higher_better);

struct Matrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

/// entry(i, j): scaled regret on space j of the best config of space i,
/// averaged over task pairs. Argbest ties go to the lowest config index. A
/// task whose configs all score the same contributes zero regret.
Matrix regret_matrix(const SweepTable &table);

/// Kendall tau-b between the per-space score vectors (mean over tasks of
/// the scaled, orientation-adjusted config means). Throws
/// Error(undefined_correlation) when a vector is constant.
Matrix kendall_matrix(const SweepTable &table);

struct LooRow {
  std::string space;
  std::size_t own_best = 0;       // column into SweepTable::configs
  std::size_t transferred = 0;    // best on average over the other spaces
  double transfer_to = 0.0;
  double transfer_from = 0.0;
};

/// Requires at least two spaces.
std::vector<LooRow> leave_one_out(const SweepTable &table);

struct RankTable {
  std::vector<std::string> methods;
  std::vector<double> avg_rank;
};

/// scores[method][task]. Per task, methods are ranked 1..M (1 = best,
/// ties averaged); each task weighs 1/(tasks in its space). `only_spaces`
/// restricts the tasks considered. Throws Error(missing_cell) when a score
/// is absent.
RankTable avg_rank_table(const std::map<std::string, std::map<std::string, double>> &scores,
                         const std::map<std::string, TaskInfo> &tasks = {},
                         const std::vector<std::string> &only_spaces = {});

struct InsightCell {
  std::string method;
  std::string property;
  double tau = 0.0;
};

/// Kendall tau-b between each method's rank list over spaces and each
/// property list. A negative tau means the method ranks better (smaller
/// rank) on spaces with larger property values.
std::vector<InsightCell> rank_correlation_insights(
    const std::map<std::string, std::vector<double>> &ranks,
    const std::map<std::string, std::vector<double>> &properties);

}  // namespace archbench
