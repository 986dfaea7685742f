#pragma once

#include <vector>

#include "bench/benchmark.hpp"
#include "predict/predictor.hpp"

namespace archbench {

/// `count` distinct architectures drawn uniformly: from the stored ids of a
/// tabular benchmark, otherwise from the space. Throws Error(degenerate) when
/// fewer than `count` distinct architectures exist.
std::vector<ArchId> sample_distinct(const Benchmark &bench, std::size_t count, Rng &rng);

/// Fits `cfg` on `train_size` architectures and returns the Spearman
/// correlation between predictions and benchmark values on `test_size`
/// further architectures. Train and test draws are disjoint.
double evaluate_predictor(const Benchmark &bench, const PredictorConfig &cfg,
                          std::size_t train_size, std::size_t test_size, Rng &rng);

}  // namespace archbench
