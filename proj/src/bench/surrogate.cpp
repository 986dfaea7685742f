#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "bench/benchmark.hpp"
#include "common/error.hpp"
#include "graph/neighborhood.hpp"

namespace archbench {

SurrogateBenchmark::SurrogateBenchmark(std::string id, SearchSpaceDef space, MetricInfo metric,
                                       FittedPredictor model, double clip_lo, double clip_hi,
                                       std::optional<FittedPredictor> time_model)
    : Benchmark(std::move(id), std::move(space), BackendKind::surrogate, {std::move(metric)}, 1),
      model_(std::move(model)),
      time_model_(std::move(time_model)),
      clip_lo_(clip_lo),
      clip_hi_(clip_hi) {}

double SurrogateBenchmark::query(const ArchId &arch, std::string_view metric_name,
                                 std::optional<int> epoch, SeedPolicy) const {
  epoch_index(metric(metric_name), epoch);
  const auto x = encode_onehot(decode(arch.str(), space()), space());
  return std::clamp(model_.predict({x}).front(), clip_lo_, clip_hi_);
}

double SurrogateBenchmark::query_train_time(const ArchId &arch) const {
  if (!time_model_) throw Error(ErrorCode::missing_arch, "surrogate was fit without train times");
  const auto x = encode_onehot(decode(arch.str(), space()), space());
  return std::max(0.0, time_model_->predict({x}).front());
}

std::unique_ptr<SurrogateBenchmark> fit_surrogate(const std::vector<SurrogateRecord> &records,
                                                  const SearchSpaceDef &space,
                                                  const PredictorConfig &hp, Rng &rng,
                                                  MetricInfo metric) {
  if (records.size() < 2) throw Error(ErrorCode::parameter, "surrogate needs at least 2 records");
  std::vector<std::vector<double>> x;
  std::vector<double> y, t;
  x.reserve(records.size());
  bool have_time = true;
  for (const auto &r : records) {
    x.push_back(encode_onehot(decode(r.arch.str(), space), space));
    y.push_back(r.value);
    if (r.train_time) {
      t.push_back(*r.train_time);
    } else {
      have_time = false;
    }
  }
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double clip_lo = *lo, clip_hi = *hi;
  auto model = FittedPredictor::fit(hp, x, y, rng);
  std::optional<FittedPredictor> time_model;
  if (have_time) time_model = FittedPredictor::fit(hp, x, t, rng);
  return std::make_unique<SurrogateBenchmark>(space.space_id, space, std::move(metric),
                                              std::move(model), clip_lo, clip_hi,
                                              std::move(time_model));
}

// ---------------------------------------------------------------------------

LcSurrogateBenchmark::LcSurrogateBenchmark(std::string id, SearchSpaceDef space, MetricInfo metric)
    : Benchmark(std::move(id), std::move(space), BackendKind::surrogate, {std::move(metric)}, 1) {}

std::vector<double> LcSurrogateBenchmark::curve(const ArchId &arch) const {
  std::vector<double> coef;
  if (auto it = train_coefficients_.find(arch.str()); it != train_coefficients_.end()) {
    coef = it->second;
  } else {
    const auto x = encode_onehot(decode(arch.str(), space()), space());
    for (const auto &m : coefficient_models_) coef.push_back(m.predict({x}).front());
  }
  std::vector<double> out = mean_curve_;
  for (std::size_t k = 0; k < coef.size(); ++k) {
    for (std::size_t e = 0; e < out.size(); ++e) out[e] += coef[k] * basis_[k][e];
  }
  return out;
}

double LcSurrogateBenchmark::query(const ArchId &arch, std::string_view metric_name,
                                   std::optional<int> epoch, SeedPolicy) const {
  const std::size_t e = epoch_index(metric(metric_name), epoch);
  return curve(arch)[e];
}

double LcSurrogateBenchmark::query_train_time(const ArchId &) const {
  throw Error(ErrorCode::missing_arch, "learning-curve surrogate has no train-time model");
}

std::unique_ptr<LcSurrogateBenchmark> fit_lc_surrogate(
    const std::vector<std::pair<ArchId, std::vector<double>>> &records,
    const SearchSpaceDef &space, int rank, const PredictorConfig &hp, Rng &rng,
    MetricInfo metric) {
  if (records.empty()) throw Error(ErrorCode::parameter, "learning-curve surrogate needs records");
  const std::size_t n = records.size();
  const std::size_t epochs = records.front().second.size();
  for (const auto &r : records) {
    if (r.second.size() != epochs) throw Error(ErrorCode::parameter, "series lengths differ");
  }
  if (epochs == 0) throw Error(ErrorCode::parameter, "empty series");
  if (rank < 1 || static_cast<std::size_t>(rank) > std::min(n, epochs)) {
    throw Error(ErrorCode::parameter, "rank must be in [1, min(records, epochs)]");
  }
  if (metric.epochs.empty()) {
    for (std::size_t e = 1; e <= epochs; ++e) metric.epochs.push_back(static_cast<int>(e));
  }
  if (metric.epochs.size() != epochs) {
    throw Error(ErrorCode::parameter, "epoch grid does not match series length");
  }

  Eigen::MatrixXd y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(epochs));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = 0; e < epochs; ++e) {
      y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e)) = records[i].second[e];
    }
  }
  const Eigen::RowVectorXd mu = y.colwise().mean();
  const Eigen::MatrixXd centered = y.rowwise() - mu;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
  const Eigen::MatrixXd coef = centered * v;

  auto bench = std::unique_ptr<LcSurrogateBenchmark>(
      new LcSurrogateBenchmark(space.space_id, space, std::move(metric)));
  bench->mean_curve_.assign(mu.data(), mu.data() + mu.size());
  for (int k = 0; k < rank; ++k) {
    bench->basis_.emplace_back(v.col(k).data(), v.col(k).data() + v.rows());
  }

  std::vector<std::vector<double>> x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(encode_onehot(decode(records[i].first.str(), space), space));
    std::vector<double> c(static_cast<std::size_t>(rank));
    for (int k = 0; k < rank; ++k) c[static_cast<std::size_t>(k)] = coef(static_cast<Eigen::Index>(i), k);
    if (!bench->train_coefficients_.emplace(records[i].first.str(), std::move(c)).second) {
      throw Error(ErrorCode::duplicate_key, "duplicate architecture " + records[i].first.str());
    }
  }
  for (int k = 0; k < rank; ++k) {
    std::vector<double> target(n);
    for (std::size_t i = 0; i < n; ++i) target[i] = coef(static_cast<Eigen::Index>(i), k);
    if (n >= 2) {
      bench->coefficient_models_.push_back(FittedPredictor::fit(hp, x, target, rng));
    } else {
      bench->coefficient_models_.push_back(FittedPredictor::fit(hp, {x[0], x[0]}, {target[0], target[0]}, rng));
    }
  }
  return bench;
}

}  // namespace archbench
