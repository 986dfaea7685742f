#pragma once

#include <string>
#include <utility>
#include <vector>

#include "analysis/landscape.hpp"
#include "analysis/transfer.hpp"

namespace archbench {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
  /// Throws Error(io).
  void write(const std::string &path) const;
};

/// Shortest text that reads back to the same double.
std::string format_number(double v);

template <typename T>
using Labeled = std::vector<std::pair<std::string, T>>;

CsvTable boxstats_csv(const Labeled<DistributionStats> &stats);
CsvTable rwa_csv(const Labeled<std::vector<double>> &rho);
CsvTable nbhd_csv(const Labeled<double> &sizes);
CsvTable traintime_csv(const Labeled<double> &seconds);
CsvTable iqr_csv(const Labeled<std::vector<IqrPoint>> &points);
/// Long form: one row per (tuned_on, evaluated_on) cell.
CsvTable regret_csv(const Labeled<Matrix> &per_method);
CsvTable kendall_csv(const Labeled<Matrix> &per_method);
CsvTable loo_csv(const Labeled<std::vector<LooRow>> &per_method, const Labeled<SweepTable> &tables);
/// One row per (subset, method); the label names the subset of spaces.
CsvTable ranks_csv(const Labeled<RankTable> &subsets);

}  // namespace archbench
