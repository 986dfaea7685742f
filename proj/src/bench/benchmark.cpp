#include "bench/benchmark.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <zlib.h>

#include "common/error.hpp"

namespace archbench {

const char *backend_name(BackendKind kind) {
  switch (kind) {
    case BackendKind::tabular: return "tabular";
    case BackendKind::surrogate: return "surrogate";
    case BackendKind::synthetic: return "synthetic";
  }
  return "?";
}

Benchmark::Benchmark(std::string id, SearchSpaceDef space, BackendKind backend,
                     std::vector<MetricInfo> metrics, int seeds)
    : id_(std::move(id)),
      space_(std::move(space)),
      backend_(backend),
      metrics_(std::move(metrics)),
      seeds_(seeds) {
  if (metrics_.empty()) throw Error(ErrorCode::parameter, "benchmark needs at least one metric");
  if (seeds_ < 1) throw Error(ErrorCode::parameter, "seed count must be positive");
  for (auto &m : metrics_) {
    if (m.epochs.empty()) m.epochs = {1};
    if (!std::is_sorted(m.epochs.begin(), m.epochs.end()) ||
        std::adjacent_find(m.epochs.begin(), m.epochs.end()) != m.epochs.end()) {
      throw Error(ErrorCode::parameter, "epoch grid of '" + m.name + "' must be strictly increasing");
    }
  }
}

std::size_t Benchmark::metric_index(std::string_view name) const {
  for (std::size_t i = 0; i < metrics_.size(); ++i) {
    if (metrics_[i].name == name) return i;
  }
  throw Error(ErrorCode::parameter, "unknown metric '" + std::string(name) + "'");
}

const MetricInfo &Benchmark::metric(std::string_view name) const {
  return metrics_[metric_index(name)];
}

std::size_t Benchmark::epoch_index(const MetricInfo &m, std::optional<int> epoch) const {
  if (!epoch) return m.epochs.size() - 1;
  auto it = std::lower_bound(m.epochs.begin(), m.epochs.end(), *epoch);
  if (it == m.epochs.end() || *it != *epoch) {
    throw Error(ErrorCode::epoch, "epoch " + std::to_string(*epoch) + " is not on the grid of '" +
                                      m.name + "'");
  }
  return static_cast<std::size_t>(it - m.epochs.begin());
}

// ---------------------------------------------------------------------------

TabularBenchmark::TabularBenchmark(std::string id, SearchSpaceDef space,
                                   std::vector<MetricInfo> metrics, int seeds,
                                   std::vector<MetricRecord> records, nlohmann::json extra)
    : Benchmark(std::move(id), std::move(space), BackendKind::tabular, std::move(metrics), seeds),
      records_(std::move(records)),
      extra_(std::move(extra)) {
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto &r = records_[i];
    if (r.values.size() != this->metrics().size()) {
      throw Error(ErrorCode::format, "record '" + r.arch.str() + "' has wrong metric count");
    }
    for (std::size_t m = 0; m < r.values.size(); ++m) {
      if (r.values[m].size() != static_cast<std::size_t>(seed_count())) {
        throw Error(ErrorCode::format, "record '" + r.arch.str() + "' has wrong seed count");
      }
      for (const auto &series : r.values[m]) {
        if (series.size() != this->metrics()[m].epochs.size()) {
          throw Error(ErrorCode::format, "record '" + r.arch.str() + "' has wrong epoch count");
        }
      }
    }
    if (!r.train_time.empty() && r.train_time.size() != static_cast<std::size_t>(seed_count())) {
      throw Error(ErrorCode::format, "record '" + r.arch.str() + "' has wrong train-time count");
    }
    if (!index_.emplace(r.arch.str(), i).second) {
      throw Error(ErrorCode::duplicate_key, "duplicate architecture '" + r.arch.str() + "'");
    }
  }
}

const MetricRecord &TabularBenchmark::find(const ArchId &arch) const {
  auto it = index_.find(arch.str());
  if (it == index_.end()) {
    throw Error(ErrorCode::missing_arch, "architecture not in table: " + arch.str());
  }
  return records_[it->second];
}

double TabularBenchmark::query(const ArchId &arch, std::string_view metric_name,
                               std::optional<int> epoch, SeedPolicy policy) const {
  const std::size_t m = metric_index(metric_name);
  const std::size_t e = epoch_index(metrics()[m], epoch);
  const auto &per_seed = find(arch).values[m];
  switch (policy.kind) {
    case SeedPolicy::Kind::fixed:
      if (policy.seed < 0 || policy.seed >= seed_count()) {
        throw Error(ErrorCode::parameter, "seed index out of range");
      }
      return per_seed[static_cast<std::size_t>(policy.seed)][e];
    case SeedPolicy::Kind::random:
      if (policy.rng == nullptr) throw Error(ErrorCode::parameter, "random seed policy needs an rng");
      return per_seed[policy.rng->uniform_index(per_seed.size())][e];
    case SeedPolicy::Kind::mean: break;
  }
  double sum = 0;
  for (const auto &s : per_seed) sum += s[e];
  return sum / static_cast<double>(per_seed.size());
}

double TabularBenchmark::query_train_time(const ArchId &arch) const {
  const auto &r = find(arch);
  if (r.train_time.empty()) {
    throw Error(ErrorCode::missing_arch, "no train time stored for " + arch.str());
  }
  double sum = 0;
  for (double t : r.train_time) sum += t;
  return sum / static_cast<double>(r.train_time.size());
}

std::optional<std::vector<ArchId>> TabularBenchmark::stored_ids() const {
  std::vector<ArchId> ids;
  ids.reserve(records_.size());
  for (const auto &r : records_) ids.push_back(r.arch);
  return ids;
}

// ---------------------------------------------------------------------------
// File format

nlohmann::ordered_json tabular_metadata(const Benchmark &bench, const nlohmann::json &extra) {
  nlohmann::ordered_json meta;
  meta["format_version"] = 1;
  meta["space_id"] = bench.space().space_id;
  auto metrics = nlohmann::ordered_json::array();
  for (const auto &m : bench.metrics()) {
    nlohmann::ordered_json mj;
    mj["name"] = m.name;
    mj["orientation"] = orientation_name(m.orientation);
    mj["epochs"] = m.epochs;
    metrics.push_back(std::move(mj));
  }
  meta["metrics"] = std::move(metrics);
  meta["seeds"] = bench.seed_count();
  meta["catalog"] = nlohmann::json(bench.space());
  if (!extra.empty()) meta["extra"] = extra;
  return meta;
}

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string &path) : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw Error(ErrorCode::io, "cannot open " + path);
  }
  ~LineReader() { gzclose(file_); }
  LineReader(const LineReader &) = delete;
  LineReader &operator=(const LineReader &) = delete;

  bool next(std::string &line) {
    line.clear();
    char buf[8192];
    while (gzgets(file_, buf, sizeof buf) != nullptr) {
      line += buf;
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
    }
    int err = 0;
    gzerror(file_, &err);
    if (err != Z_OK && err != Z_STREAM_END) throw Error(ErrorCode::io, "read error");
    return !line.empty();
  }

 private:
  gzFile file_;
};

MetricInfo parse_metric(const nlohmann::json &j) {
  MetricInfo m;
  m.name = j.at("name").get<std::string>();
  m.orientation = parse_orientation(j.value("orientation", std::string("higher_better")));
  m.epochs = j.value("epochs", std::vector<int>{1});
  return m;
}

bool ends_with(const std::string &s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::unique_ptr<TabularBenchmark> load_tabular(const std::string &path) {
  LineReader reader(path);
  std::string line;
  std::size_t line_no = 0;
  if (!reader.next(line)) throw FormatError(1, "missing metadata line");
  line_no = 1;

  SearchSpaceDef space;
  std::vector<MetricInfo> metrics;
  int seeds = 1;
  nlohmann::json extra = nlohmann::json::object();
  try {
    const auto meta = nlohmann::json::parse(line);
    if (meta.at("format_version").get<int>() != 1) {
      throw FormatError(line_no, "unsupported format_version");
    }
    space = meta.at("catalog").get<SearchSpaceDef>();
    for (const auto &mj : meta.at("metrics")) metrics.push_back(parse_metric(mj));
    seeds = meta.at("seeds").get<int>();
    if (meta.contains("extra")) extra = meta.at("extra");
    if (meta.at("space_id").get<std::string>() != space.space_id) {
      throw FormatError(line_no, "space_id does not match catalog");
    }
  } catch (const FormatError &) {
    throw;
  } catch (const std::exception &e) {
    throw FormatError(line_no, std::string("bad metadata: ") + e.what());
  }
  if (metrics.empty() || seeds < 1) throw FormatError(line_no, "metadata needs metrics and seeds >= 1");

  std::vector<MetricRecord> records;
  std::unordered_map<std::string, std::size_t> seen;
  while (reader.next(line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    MetricRecord rec;
    try {
      const auto j = nlohmann::json::parse(line);
      rec.arch = ArchId(j.at("id").get<std::string>());
      decode(rec.arch.str(), space);
      const auto &mv = j.at("m");
      for (const auto &m : metrics) {
        auto series = mv.at(m.name).get<std::vector<std::vector<double>>>();
        if (series.size() != static_cast<std::size_t>(seeds)) {
          throw FormatError(line_no, "metric '" + m.name + "' has wrong seed count");
        }
        for (const auto &s : series) {
          if (s.size() != m.epochs.size()) {
            throw FormatError(line_no, "metric '" + m.name + "' has wrong epoch count");
          }
        }
        rec.values.push_back(std::move(series));
      }
      if (j.contains("t")) {
        rec.train_time = j.at("t").get<std::vector<double>>();
        if (rec.train_time.size() != static_cast<std::size_t>(seeds)) {
          throw FormatError(line_no, "train time has wrong seed count");
        }
      }
    } catch (const FormatError &) {
      throw;
    } catch (const std::exception &e) {
      throw FormatError(line_no, std::string("bad record: ") + e.what());
    }
    if (!seen.emplace(rec.arch.str(), line_no).second) {
      throw Error(ErrorCode::duplicate_key, "line " + std::to_string(line_no) +
                                                ": duplicate architecture '" + rec.arch.str() + "'");
    }
    records.push_back(std::move(rec));
  }
  std::string id = extra.value("bench_id", space.space_id);
  return std::make_unique<TabularBenchmark>(std::move(id), std::move(space), std::move(metrics),
                                            seeds, std::move(records), std::move(extra));
}

void save_tabular(const TabularBenchmark &bench, const std::string &path) {
  std::string out = tabular_metadata(bench, bench.extra()).dump() + "\n";
  for (const auto &r : bench.records()) {
    nlohmann::ordered_json j;
    j["id"] = r.arch.str();
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < bench.metrics().size(); ++i) m[bench.metrics()[i].name] = r.values[i];
    j["m"] = std::move(m);
    if (!r.train_time.empty()) j["t"] = r.train_time;
    out += j.dump();
    out += '\n';
  }
  if (ends_with(path, ".gz")) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (f == nullptr) throw Error(ErrorCode::io, "cannot write " + path);
    const int written = gzwrite(f, out.data(), static_cast<unsigned>(out.size()));
    const int closed = gzclose(f);
    if (written != static_cast<int>(out.size()) || closed != Z_OK) {
      throw Error(ErrorCode::io, "write failed for " + path);
    }
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io, "cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::io, "write failed for " + path);
}

}  // namespace archbench
