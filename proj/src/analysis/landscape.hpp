#pragma once

#include <span>
#include <string>
#include <vector>

#include "bench/benchmark.hpp"
#include "common/rng.hpp"
#include "graph/search_space.hpp"

namespace archbench {

struct DistributionStats {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double mean = 0, stddev = 0, iqr = 0;
  std::size_t sample_size = 0;
  bool exhaustive = false;
};

/// Summary of a value sample. Quartiles interpolate linearly between order
/// statistics (inclusive method); stddev is the population form. Throws
/// Error(degenerate) on an empty sample.
DistributionStats describe(std::span<const double> values, bool exhaustive = false);

/// Architectures a landscape statistic runs over: every stored or valid
/// architecture when there are at most `sample_cap` of them, otherwise
/// `sample_cap` distinct uniform draws. The flag reports which case applied.
struct ArchSample {
  std::vector<ArchId> ids;
  bool exhaustive = false;
};

ArchSample sample_architectures(const Benchmark &bench, std::size_t sample_cap, Rng &rng);

/// Distribution of the metric (default metric when empty) at the last
/// epoch, averaged over seeds. Throws Error(parameter) when sample_cap < 2
/// and Error(degenerate) for an empty benchmark.
DistributionStats distribution_stats(const Benchmark &bench, std::size_t sample_cap, Rng &rng,
                                     const std::string &metric = {});

/// rho(1..K) of a single series, centered on its own mean. Throws
/// Error(degenerate) for a constant series and Error(parameter) unless
/// size > K >= 1.
std::vector<double> autocorrelation(std::span<const double> series, int max_lag);

/// Random-walk autocorrelation: `n_walks` walks of `walk_len` values, each
/// step one uniform mutation, lags averaged over walks. Walks on a tabular
/// benchmark stay inside its stored architectures.
std::vector<double> rwa(const Benchmark &bench, int walk_len, int max_lag, int n_walks, Rng &rng,
                        const std::string &metric = {});

double avg_neighborhood_size(const SearchSpaceDef &space, std::size_t sample_cap, Rng &rng);

/// Mean of query_train_time over the architecture sample.
double avg_train_time(const Benchmark &bench, std::size_t sample_cap, Rng &rng);

struct IqrPoint {
  int ops = 0;
  DistributionStats stats;
};

/// For each q, the distribution over the subspace whose labeled slots use
/// only the first q operations of the vocabulary. Throws Error(parameter)
/// when q is outside [1, |op_vocab|].
std::vector<IqrPoint> iqr_vs_num_ops(const Benchmark &bench, const std::vector<int> &op_counts,
                                     std::size_t sample_cap, Rng &rng,
                                     const std::string &metric = {});

}  // namespace archbench
