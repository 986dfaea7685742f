#include "analysis/csv.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "common/error.hpp"

namespace archbench {

namespace {

std::string escape(const std::string &field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void append_line(std::string &out, const std::vector<std::string> &fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  out += '\n';
}

CsvTable matrix_csv(const Labeled<Matrix> &per_method, const std::string &value_name) {
  CsvTable t{{"method", "tuned_on", "evaluated_on", value_name}, {}};
  for (const auto &[method, m] : per_method) {
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      for (std::size_t j = 0; j < m.labels.size(); ++j) {
        t.rows.push_back({method, m.labels[i], m.labels[j], format_number(m.values[i][j])});
      }
    }
  }
  return t;
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  append_line(out, header);
  for (const auto &r : rows) append_line(out, r);
  return out;
}

void CsvTable::write(const std::string &path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  f << str();
  if (!f) throw Error(ErrorCode::io, "write to '" + path + "' failed");
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable boxstats_csv(const Labeled<DistributionStats> &stats) {
  CsvTable t{{"bench", "min", "q1", "median", "q3", "max", "mean", "stddev", "iqr", "sample_size",
              "exhaustive"},
             {}};
  for (const auto &[bench, s] : stats) {
    t.rows.push_back({bench, format_number(s.min), format_number(s.q1), format_number(s.median),
                      format_number(s.q3), format_number(s.max), format_number(s.mean),
                      format_number(s.stddev), format_number(s.iqr), std::to_string(s.sample_size),
                      s.exhaustive ? "true" : "false"});
  }
  return t;
}

CsvTable rwa_csv(const Labeled<std::vector<double>> &rho) {
  CsvTable t{{"bench", "lag", "rho"}, {}};
  for (const auto &[bench, r] : rho) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      t.rows.push_back({bench, std::to_string(k + 1), format_number(r[k])});
    }
  }
  return t;
}

CsvTable nbhd_csv(const Labeled<double> &sizes) {
  CsvTable t{{"bench", "avg_neighbors"}, {}};
  for (const auto &[bench, v] : sizes) t.rows.push_back({bench, format_number(v)});
  return t;
}

CsvTable traintime_csv(const Labeled<double> &seconds) {
  CsvTable t{{"bench", "avg_train_seconds"}, {}};
  for (const auto &[bench, v] : seconds) t.rows.push_back({bench, format_number(v)});
  return t;
}

CsvTable iqr_csv(const Labeled<std::vector<IqrPoint>> &points) {
  CsvTable t{{"bench", "ops", "iqr", "sample_size", "exhaustive"}, {}};
  for (const auto &[bench, list] : points) {
    for (const auto &p : list) {
      t.rows.push_back({bench, std::to_string(p.ops), format_number(p.stats.iqr),
                        std::to_string(p.stats.sample_size), p.stats.exhaustive ? "true" : "false"});
    }
  }
  return t;
}

CsvTable regret_csv(const Labeled<Matrix> &per_method) { return matrix_csv(per_method, "regret"); }

CsvTable kendall_csv(const Labeled<Matrix> &per_method) { return matrix_csv(per_method, "tau"); }

CsvTable loo_csv(const Labeled<std::vector<LooRow>> &per_method, const Labeled<SweepTable> &tables) {
  CsvTable t{{"method", "space", "transfer_to", "transfer_from", "own_best_config", "transferred_config"},
             {}};
  for (std::size_t m = 0; m < per_method.size(); ++m) {
    const auto &[method, rows] = per_method[m];
    const auto &configs = tables.at(m).second.configs;
    for (const auto &r : rows) {
      t.rows.push_back({method, r.space, format_number(r.transfer_to), format_number(r.transfer_from),
                        std::to_string(configs.at(r.own_best)), std::to_string(configs.at(r.transferred))});
    }
  }
  return t;
}

CsvTable ranks_csv(const Labeled<RankTable> &subsets) {
  CsvTable t{{"subset", "method", "avg_rank"}, {}};
  for (const auto &[subset, table] : subsets) {
    for (std::size_t i = 0; i < table.methods.size(); ++i) {
      t.rows.push_back({subset, table.methods[i], format_number(table.avg_rank[i])});
    }
  }
  return t;
}

}  // namespace archbench
