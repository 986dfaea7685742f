#include "predict/evaluate.hpp"

#include <unordered_set>

#include "common/error.hpp"
#include "graph/neighborhood.hpp"
#include "stats/rank.hpp"

namespace archbench {

std::vector<ArchId> sample_distinct(const Benchmark &bench, std::size_t count, Rng &rng) {
  if (auto stored = bench.stored_ids()) {
    if (stored->size() < count) {
      throw Error(ErrorCode::degenerate, "benchmark stores " + std::to_string(stored->size()) +
                                             " architectures, " + std::to_string(count) + " requested");
    }
    std::vector<ArchId> out;
    out.reserve(count);
    for (std::size_t i : rng.sample_without_replacement(stored->size(), count)) {
      out.push_back((*stored)[i]);
    }
    return out;
  }
  const auto size = space_size(bench.space());
  if (size.exact && *size.exact < count) {
    throw Error(ErrorCode::degenerate, "space has " + std::to_string(*size.exact) +
                                           " architectures, " + std::to_string(count) + " requested");
  }
  std::vector<ArchId> out;
  std::unordered_set<ArchId> seen;
  out.reserve(count);
  while (out.size() < count) {
    ArchId id = canonical_encode(sample_uniform(bench.space(), rng), bench.space());
    if (seen.insert(id).second) out.push_back(std::move(id));
  }
  return out;
}

double evaluate_predictor(const Benchmark &bench, const PredictorConfig &cfg,
                          std::size_t train_size, std::size_t test_size, Rng &rng) {
  if (train_size < 2 || test_size < 2) {
    throw Error(ErrorCode::parameter, "train and test sizes must be at least 2");
  }
  const auto ids = sample_distinct(bench, train_size + test_size, rng);
  std::vector<std::vector<double>> x_train, x_test;
  std::vector<double> y_train, y_test;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto x = encode_onehot(decode(ids[i].str(), bench.space()), bench.space());
    const double y = bench.value(ids[i]);
    if (i < train_size) {
      x_train.push_back(std::move(x));
      y_train.push_back(y);
    } else {
      x_test.push_back(std::move(x));
      y_test.push_back(y);
    }
  }
  const auto model = FittedPredictor::fit(cfg, x_train, y_train, rng);
  return spearman(model.predict(x_test), y_test);
}

}  // namespace archbench
