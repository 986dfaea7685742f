#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "catalog/catalog.hpp"
#include "common/rng.hpp"
#include "graph/arch_id.hpp"
#include "graph/search_space.hpp"
#include "predict/predictor.hpp"

namespace archbench {

enum class BackendKind { tabular, surrogate, synthetic };

const char *backend_name(BackendKind kind);

struct MetricInfo {
  std::string name;
  Orientation orientation = Orientation::higher_better;
  std::vector<int> epochs;  // ascending; the last entry is the final epoch

  bool operator==(const MetricInfo &) const = default;
};

/// How per-seed values are combined. `random` draws one seed from the
/// caller's stream.
struct SeedPolicy {
  enum class Kind { fixed, mean, random };
  Kind kind = Kind::mean;
  int seed = 0;
  Rng *rng = nullptr;

  static SeedPolicy mean() { return {}; }
  static SeedPolicy fixed(int k) { return {Kind::fixed, k, nullptr}; }
  static SeedPolicy random(Rng &r) { return {Kind::random, 0, &r}; }
};

/// Queryable benchmark over one search space. Immutable once built;
/// concurrent queries are safe.
class Benchmark {
 public:
  virtual ~Benchmark() = default;

  const std::string &id() const { return id_; }
  const SearchSpaceDef &space() const { return space_; }
  BackendKind backend() const { return backend_; }
  const std::vector<MetricInfo> &metrics() const { return metrics_; }
  int seed_count() const { return seeds_; }

  /// Throws Error(parameter) for unknown metric names.
  const MetricInfo &metric(std::string_view name) const;
  const MetricInfo &default_metric() const { return metrics_.front(); }

  /// Metric value; `epoch` defaults to the last epoch of the grid.
  virtual double query(const ArchId &arch, std::string_view metric,
                       std::optional<int> epoch = std::nullopt,
                       SeedPolicy policy = SeedPolicy::mean()) const = 0;

  /// Training seconds, averaged over seeds.
  virtual double query_train_time(const ArchId &arch) const = 0;

  /// Architectures with stored evaluations; nullopt for backends that
  /// answer every valid architecture.
  virtual std::optional<std::vector<ArchId>> stored_ids() const { return std::nullopt; }

  /// Convenience: default metric, last epoch, mean over seeds.
  double value(const ArchId &arch) const { return query(arch, default_metric().name); }

 protected:
  Benchmark(std::string id, SearchSpaceDef space, BackendKind backend,
            std::vector<MetricInfo> metrics, int seeds);

  /// Index of `epoch` in the metric's grid (last when omitted); throws
  /// Error(epoch) when the epoch is not on the grid.
  std::size_t epoch_index(const MetricInfo &m, std::optional<int> epoch) const;

  std::size_t metric_index(std::string_view name) const;

 private:
  std::string id_;
  SearchSpaceDef space_;
  BackendKind backend_;
  std::vector<MetricInfo> metrics_;
  int seeds_;
};

// ---------------------------------------------------------------------------
// Tabular

struct MetricRecord {
  ArchId arch;
  // values[metric][seed][epoch]
  std::vector<std::vector<std::vector<double>>> values;
  std::vector<double> train_time;  // seconds per seed
};

class TabularBenchmark final : public Benchmark {
 public:
  /// Builds the in-memory index; throws Error(duplicate_key) on repeated ids
  /// and Error(format) on shape mismatches.
  TabularBenchmark(std::string id, SearchSpaceDef space, std::vector<MetricInfo> metrics,
                   int seeds, std::vector<MetricRecord> records,
                   nlohmann::json extra = nlohmann::json::object());

  double query(const ArchId &arch, std::string_view metric,
               std::optional<int> epoch = std::nullopt,
               SeedPolicy policy = SeedPolicy::mean()) const override;
  double query_train_time(const ArchId &arch) const override;
  std::optional<std::vector<ArchId>> stored_ids() const override;

  const std::vector<MetricRecord> &records() const { return records_; }
  const nlohmann::json &extra() const { return extra_; }

 private:
  const MetricRecord &find(const ArchId &arch) const;

  std::vector<MetricRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  nlohmann::json extra_;
};

/// Reads a `.nbtab` file (optionally gzip-compressed). Throws FormatError
/// with the 1-based line number for malformed content and Error(duplicate_key)
/// for repeated architecture ids.
std::unique_ptr<TabularBenchmark> load_tabular(const std::string &path);

/// Writes the line-delimited format. Gzip when the path ends in ".gz".
void save_tabular(const TabularBenchmark &bench, const std::string &path);

/// Metadata line (line 1) of the format.
nlohmann::ordered_json tabular_metadata(const Benchmark &bench,
                                        const nlohmann::json &extra = nlohmann::json::object());

// ---------------------------------------------------------------------------
// Synthetic

/// Deterministic landscape
///   f = (1 - r) * S + r * P
/// where S is the affinely normalized sum of per-slot weights and P the
/// normalized sum of pairwise interaction weights over all slot pairs. Both
/// normalizations use the analytic table minima and maxima, so f is in
/// [0, 1]. `iid` replaces f with an independent hash-derived uniform value
/// per architecture.
struct SyntheticSpec {
  std::uint64_t seed = 0;
  double ruggedness = 0.0;
  bool iid = false;
  double noise = 0.0;  // stddev of per-seed deterministic noise
  int seeds = 1;
  std::vector<int> epochs = {1};
  double time_base = 100.0;
  std::vector<double> op_time_costs;  // per op; drawn from the seed when empty
  std::string metric = "valid_acc";
  std::string name;  // benchmark id; defaults to the space id
  // Optional explicit tables; drawn from the seed when empty.
  std::vector<std::vector<double>> slot_weights;                 // [slot][value]
  std::vector<std::vector<std::vector<double>>> pair_weights;    // [pair][a][b]

  void validate() const;
};

void to_json(nlohmann::json &j, const SyntheticSpec &spec);
void from_json(const nlohmann::json &j, SyntheticSpec &spec);

class SyntheticBenchmark final : public Benchmark {
 public:
  SyntheticBenchmark(std::string id, SearchSpaceDef space, SyntheticSpec spec);

  double query(const ArchId &arch, std::string_view metric,
               std::optional<int> epoch = std::nullopt,
               SeedPolicy policy = SeedPolicy::mean()) const override;
  double query_train_time(const ArchId &arch) const override;

  /// Noise-free landscape value of a cell.
  double fitness(const CellGraph &cell) const;
  double fitness(const ArchId &arch) const;
  double train_time(const CellGraph &cell) const;

  const SyntheticSpec &spec() const { return spec_; }
  const std::vector<std::vector<double>> &slot_weights() const { return slot_weights_; }

 private:
  double seed_value(const ArchId &arch, const CellGraph &cell, int seed) const;

  SyntheticSpec spec_;
  std::vector<int> cardinalities_;
  std::vector<std::vector<double>> slot_weights_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::vector<std::vector<double>>> pair_weights_;
  std::vector<double> op_costs_;
  double sep_min_ = 0, sep_max_ = 0, pair_min_ = 0, pair_max_ = 0;
};

/// Categorical view of a cell: ops, adjacency bits, aux bits, macro choices.
std::vector<int> slot_values(const CellGraph &cell);
std::vector<int> slot_cardinalities(const SearchSpaceDef &space);

/// Builds the synthetic benchmark; when `persist_path` is set, also
/// enumerates the space (at most 10^6 cells, else Error(parameter)) and
/// writes a tabular file.
std::unique_ptr<SyntheticBenchmark> gen_synthetic(const SearchSpaceDef &space,
                                                  const SyntheticSpec &spec,
                                                  const std::optional<std::string> &persist_path = {});

/// Tabular snapshot of every cell of an enumerable synthetic benchmark.
std::unique_ptr<TabularBenchmark> tabulate(const SyntheticBenchmark &bench);

// ---------------------------------------------------------------------------
// Surrogates

class SurrogateBenchmark final : public Benchmark {
 public:
  SurrogateBenchmark(std::string id, SearchSpaceDef space, MetricInfo metric,
                     FittedPredictor model, double clip_lo, double clip_hi,
                     std::optional<FittedPredictor> time_model);

  double query(const ArchId &arch, std::string_view metric,
               std::optional<int> epoch = std::nullopt,
               SeedPolicy policy = SeedPolicy::mean()) const override;
  double query_train_time(const ArchId &arch) const override;

  double clip_lo() const { return clip_lo_; }
  double clip_hi() const { return clip_hi_; }

 private:
  FittedPredictor model_;
  std::optional<FittedPredictor> time_model_;
  double clip_lo_;
  double clip_hi_;
};

struct SurrogateRecord {
  ArchId arch;
  double value = 0.0;
  std::optional<double> train_time;
};

/// Gradient-boosted trees on one-hot encodings. Predictions are clipped to
/// the observed target range. Needs at least 2 records.
std::unique_ptr<SurrogateBenchmark> fit_surrogate(const std::vector<SurrogateRecord> &records,
                                                  const SearchSpaceDef &space,
                                                  const PredictorConfig &hp, Rng &rng,
                                                  MetricInfo metric = {"valid_acc", Orientation::higher_better, {1}});

/// Learning-curve surrogate: centered series, rank-k SVD basis, one boosted
/// regressor per basis coefficient. Training architectures reconstruct from
/// their own coefficients; others use the regressors.
class LcSurrogateBenchmark final : public Benchmark {
 public:
  double query(const ArchId &arch, std::string_view metric,
               std::optional<int> epoch = std::nullopt,
               SeedPolicy policy = SeedPolicy::mean()) const override;
  double query_train_time(const ArchId &arch) const override;

  /// Full reconstructed curve over the epoch grid.
  std::vector<double> curve(const ArchId &arch) const;
  int rank() const { return static_cast<int>(coefficient_models_.size()); }

 private:
  friend std::unique_ptr<LcSurrogateBenchmark> fit_lc_surrogate(
      const std::vector<std::pair<ArchId, std::vector<double>>> &, const SearchSpaceDef &,
      int, const PredictorConfig &, Rng &, MetricInfo);

  LcSurrogateBenchmark(std::string id, SearchSpaceDef space, MetricInfo metric);

  std::vector<double> mean_curve_;
  std::vector<std::vector<double>> basis_;  // [component][epoch]
  std::vector<FittedPredictor> coefficient_models_;
  std::unordered_map<std::string, std::vector<double>> train_coefficients_;
};

/// Throws Error(parameter) when series lengths differ or k is not in
/// [1, min(#records, #epochs)].
std::unique_ptr<LcSurrogateBenchmark> fit_lc_surrogate(
    const std::vector<std::pair<ArchId, std::vector<double>>> &records,
    const SearchSpaceDef &space, int rank, const PredictorConfig &hp, Rng &rng,
    MetricInfo metric);

}  // namespace archbench
