#include "predict/predictor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"

namespace archbench {

const char *predictor_kind_name(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::gp: return "gp";
    case PredictorKind::rf: return "rf";
    case PredictorKind::gbt: return "gbt";
  }
  return "?";
}

PredictorKind parse_predictor_kind(const std::string &text) {
  if (text == "gp") return PredictorKind::gp;
  if (text == "rf") return PredictorKind::rf;
  if (text == "gbt" || text == "xgb") return PredictorKind::gbt;
  throw Error(ErrorCode::validation, "unknown predictor kind '" + text + "'");
}

void PredictorConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw Error(ErrorCode::parameter, what);
  };
  require(gp.lengthscale > 0, "gp lengthscale must be positive");
  require(gp.signal > 0, "gp signal must be positive");
  require(gp.noise >= 0, "gp noise must be non-negative");
  require(gp.max_points >= 2, "gp max_points must be >= 2");
  require(rf.n_trees >= 1, "rf n_trees must be >= 1");
  require(rf.max_depth >= 0, "rf max_depth must be >= 0");
  require(rf.min_leaf >= 1, "rf min_leaf must be >= 1");
  require(rf.feature_frac > 0 && rf.feature_frac <= 1, "rf feature_frac must be in (0,1]");
  require(gbt.n_rounds >= 1, "gbt n_rounds must be >= 1");
  require(gbt.max_depth >= 0, "gbt max_depth must be >= 0");
  require(gbt.learning_rate > 0, "gbt learning_rate must be positive");
  require(gbt.l2 >= 0, "gbt l2 must be non-negative");
  require(gbt.min_split_gain >= 0, "gbt min_split_gain must be non-negative");
  require(gbt.min_leaf >= 1, "gbt min_leaf must be >= 1");
  require(gbt.bootstrap_models >= 0, "gbt bootstrap_models must be >= 0");
}

void to_json(nlohmann::json &j, const PredictorConfig &cfg) {
  j = nlohmann::json::object();
  j["kind"] = predictor_kind_name(cfg.kind);
  switch (cfg.kind) {
    case PredictorKind::gp:
      j["lengthscale"] = cfg.gp.lengthscale;
      j["signal"] = cfg.gp.signal;
      j["noise"] = cfg.gp.noise;
      j["max_points"] = cfg.gp.max_points;
      break;
    case PredictorKind::rf:
      j["n_trees"] = cfg.rf.n_trees;
      j["max_depth"] = cfg.rf.max_depth;
      j["min_leaf"] = cfg.rf.min_leaf;
      j["feature_frac"] = cfg.rf.feature_frac;
      j["bootstrap"] = cfg.rf.bootstrap;
      break;
    case PredictorKind::gbt:
      j["n_rounds"] = cfg.gbt.n_rounds;
      j["max_depth"] = cfg.gbt.max_depth;
      j["learning_rate"] = cfg.gbt.learning_rate;
      j["l2"] = cfg.gbt.l2;
      j["min_split_gain"] = cfg.gbt.min_split_gain;
      j["min_leaf"] = cfg.gbt.min_leaf;
      j["bootstrap_models"] = cfg.gbt.bootstrap_models;
      break;
  }
}

void from_json(const nlohmann::json &j, PredictorConfig &cfg) {
  cfg = PredictorConfig{};
  cfg.kind = parse_predictor_kind(j.at("kind").get<std::string>());
  switch (cfg.kind) {
    case PredictorKind::gp:
      cfg.gp.lengthscale = j.value("lengthscale", cfg.gp.lengthscale);
      cfg.gp.signal = j.value("signal", cfg.gp.signal);
      cfg.gp.noise = j.value("noise", cfg.gp.noise);
      cfg.gp.max_points = j.value("max_points", cfg.gp.max_points);
      break;
    case PredictorKind::rf:
      cfg.rf.n_trees = j.value("n_trees", cfg.rf.n_trees);
      cfg.rf.max_depth = j.value("max_depth", cfg.rf.max_depth);
      cfg.rf.min_leaf = j.value("min_leaf", cfg.rf.min_leaf);
      cfg.rf.feature_frac = j.value("feature_frac", cfg.rf.feature_frac);
      cfg.rf.bootstrap = j.value("bootstrap", cfg.rf.bootstrap);
      break;
    case PredictorKind::gbt:
      cfg.gbt.n_rounds = j.value("n_rounds", cfg.gbt.n_rounds);
      cfg.gbt.max_depth = j.value("max_depth", cfg.gbt.max_depth);
      cfg.gbt.learning_rate = j.value("learning_rate", cfg.gbt.learning_rate);
      cfg.gbt.l2 = j.value("l2", cfg.gbt.l2);
      cfg.gbt.min_split_gain = j.value("min_split_gain", cfg.gbt.min_split_gain);
      cfg.gbt.min_leaf = j.value("min_leaf", cfg.gbt.min_leaf);
      cfg.gbt.bootstrap_models = j.value("bootstrap_models", cfg.gbt.bootstrap_models);
      break;
  }
  cfg.validate();
}

struct FittedPredictor::GpState {
  Eigen::MatrixXd x;      // training inputs, one row per point
  Eigen::LLT<Eigen::MatrixXd> chol;
  Eigen::VectorXd alpha;  // (K + noise I)^-1 y
  GpParams params;

  double kernel(const Eigen::RowVectorXd &a, const Eigen::RowVectorXd &b) const {
    const double d2 = (a - b).squaredNorm();
    return params.signal * params.signal *
           std::exp(-d2 / (2.0 * params.lengthscale * params.lengthscale));
  }
};

namespace {

double mse(const std::vector<double> &pred, const std::vector<double> &y) {
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (pred[i] - y[i]) * (pred[i] - y[i]);
  return s / static_cast<double>(y.size());
}

FittedPredictor::BoostModel fit_boost(const FeatureMatrix &x, const std::vector<double> &y,
                                      std::span<const std::size_t> rows,
                                      const BoostParams &params, Rng &rng,
                                      std::vector<double> *loss) {
  FittedPredictor::BoostModel model;
  model.learning_rate = params.learning_rate;
  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.l2 = params.l2;
  tp.min_split_gain = params.min_split_gain;
  std::vector<double> pred(x.rows, 0.0), grad(x.rows), hess(x.rows, 1.0);
  for (int round = 0; round < params.n_rounds; ++round) {
    for (std::size_t i = 0; i < x.rows; ++i) grad[i] = pred[i] - y[i];
    model.trees.push_back(RegressionTree::fit(x, grad, hess, rows, tp, rng));
    for (std::size_t i = 0; i < x.rows; ++i) {
      pred[i] += params.learning_rate * model.trees.back().predict(x.row(i));
    }
    if (loss) loss->push_back(mse(pred, y));
  }
  return model;
}

std::vector<std::size_t> bootstrap_rows(std::size_t n, Rng &rng) {
  std::vector<std::size_t> rows(n);
  for (auto &r : rows) r = rng.uniform_index(n);
  return rows;
}

}  // namespace

double FittedPredictor::BoostModel::predict(std::span<const double> features) const {
  double out = 0;
  for (const auto &t : trees) out += learning_rate * t.predict(features);
  return out;
}

FittedPredictor FittedPredictor::fit(const PredictorConfig &cfg,
                                     const std::vector<std::vector<double>> &x_rows,
                                     const std::vector<double> &y_raw, Rng &rng) {
  cfg.validate();
  if (x_rows.size() != y_raw.size()) {
    throw Error(ErrorCode::parameter, "predictor inputs and targets differ in length");
  }
  if (x_rows.size() < 2) throw Error(ErrorCode::parameter, "predictor needs at least 2 samples");
  for (double v : y_raw) {
    if (!std::isfinite(v)) throw Error(ErrorCode::parameter, "non-finite training target");
  }

  FittedPredictor p;
  p.kind_ = cfg.kind;
  p.width_ = x_rows.front().size();
  for (const auto &r : x_rows) {
    if (r.size() != p.width_) throw Error(ErrorCode::parameter, "feature rows differ in width");
  }
  const double n = static_cast<double>(y_raw.size());
  p.y_mean_ = std::accumulate(y_raw.begin(), y_raw.end(), 0.0) / n;
  double ss = 0;
  for (double v : y_raw) ss += (v - p.y_mean_) * (v - p.y_mean_);
  p.y_scale_ = std::sqrt(ss / n);
  if (p.y_scale_ <= 1e-12 * std::max(1.0, std::abs(p.y_mean_))) {
    p.constant_ = true;
    p.y_scale_ = 1.0;
    return p;
  }
  std::vector<double> y(y_raw.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (y_raw[i] - p.y_mean_) / p.y_scale_;

  switch (cfg.kind) {
    case PredictorKind::gp: {
      std::vector<std::size_t> keep(x_rows.size());
      std::iota(keep.begin(), keep.end(), 0);
      if (keep.size() > cfg.gp.max_points) {
        keep = rng.sample_without_replacement(keep.size(), cfg.gp.max_points);
        std::sort(keep.begin(), keep.end());
      }
      auto state = std::make_shared<GpState>();
      state->params = cfg.gp;
      const auto m = static_cast<Eigen::Index>(keep.size());
      state->x.resize(m, static_cast<Eigen::Index>(p.width_));
      Eigen::VectorXd target(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto &r = x_rows[keep[static_cast<std::size_t>(i)]];
        for (Eigen::Index c = 0; c < state->x.cols(); ++c) state->x(i, c) = r[static_cast<std::size_t>(c)];
        target(i) = y[keep[static_cast<std::size_t>(i)]];
      }
      Eigen::MatrixXd k(m, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
          k(i, j) = k(j, i) = state->kernel(state->x.row(i), state->x.row(j));
        }
      }
      k.diagonal().array() += cfg.gp.noise * cfg.gp.noise;
      state->chol.compute(k);
      // Escalate diagonal jitter until the factorization succeeds.
      for (double jitter = 1e-10; state->chol.info() != Eigen::Success; jitter *= 10) {
        if (jitter > 1e-4 * (1 + 1e-9)) {
          throw Error(ErrorCode::numeric, "GP kernel matrix not positive definite after jitter");
        }
        Eigen::MatrixXd kj = k;
        kj.diagonal().array() += jitter;
        state->chol.compute(kj);
      }
      state->alpha = state->chol.solve(target);
      p.gp_ = std::move(state);
      break;
    }
    case PredictorKind::rf: {
      const auto fm = FeatureMatrix::from_rows(x_rows);
      std::vector<double> grad(y.size()), hess(y.size(), 1.0);
      for (std::size_t i = 0; i < y.size(); ++i) grad[i] = -y[i];
      TreeParams tp;
      tp.max_depth = cfg.rf.max_depth;
      tp.min_leaf = cfg.rf.min_leaf;
      tp.feature_frac = cfg.rf.feature_frac;
      std::vector<std::size_t> all(y.size());
      std::iota(all.begin(), all.end(), 0);
      for (int t = 0; t < cfg.rf.n_trees; ++t) {
        Rng tree_rng(rng.fork_seed());
        const auto rows = cfg.rf.bootstrap ? bootstrap_rows(y.size(), tree_rng) : all;
        p.forest_.push_back(RegressionTree::fit(fm, grad, hess, rows, tp, tree_rng));
      }
      break;
    }
    case PredictorKind::gbt: {
      const auto fm = FeatureMatrix::from_rows(x_rows);
      std::vector<std::size_t> all(y.size());
      std::iota(all.begin(), all.end(), 0);
      p.boost_ = fit_boost(fm, y, all, cfg.gbt, rng, &p.boost_loss_);
      if (cfg.gbt.bootstrap_models >= 2) {
        for (int b = 0; b < cfg.gbt.bootstrap_models; ++b) {
          Rng refit_rng(rng.fork_seed());
          const auto rows = bootstrap_rows(y.size(), refit_rng);
          p.boost_refits_.push_back(fit_boost(fm, y, rows, cfg.gbt, refit_rng, nullptr));
        }
      }
      break;
    }
  }
  return p;
}

void FittedPredictor::check_width(const std::vector<std::vector<double>> &x) const {
  for (const auto &r : x) {
    if (r.size() != width_) {
      throw Error(ErrorCode::parameter, "feature width " + std::to_string(r.size()) +
                                            " does not match model width " +
                                            std::to_string(width_));
    }
  }
}

Prediction FittedPredictor::raw_predict(const std::vector<double> &features) const {
  if (constant_) return {0.0, 0.0};
  switch (kind_) {
    case PredictorKind::gp: {
      const auto &s = *gp_;
      Eigen::RowVectorXd q(static_cast<Eigen::Index>(width_));
      for (Eigen::Index c = 0; c < q.size(); ++c) q(c) = features[static_cast<std::size_t>(c)];
      Eigen::VectorXd kstar(s.x.rows());
      for (Eigen::Index i = 0; i < s.x.rows(); ++i) kstar(i) = s.kernel(s.x.row(i), q);
      const double m = kstar.dot(s.alpha);
      const Eigen::VectorXd v = s.chol.matrixL().solve(kstar);
      const double var = s.params.signal * s.params.signal - v.squaredNorm();
      return {m, std::sqrt(std::max(0.0, var))};
    }
    case PredictorKind::rf: {
      double sum = 0, sq = 0;
      for (const auto &t : forest_) {
        const double v = t.predict(features);
        sum += v;
        sq += v * v;
      }
      const double n = static_cast<double>(forest_.size());
      const double m = sum / n;
      return {m, std::sqrt(std::max(0.0, sq / n - m * m))};
    }
    case PredictorKind::gbt: {
      if (boost_refits_.empty()) return {boost_.predict(features), 0.0};
      double sum = 0, sq = 0;
      for (const auto &b : boost_refits_) {
        const double v = b.predict(features);
        sum += v;
        sq += v * v;
      }
      const double n = static_cast<double>(boost_refits_.size());
      const double m = sum / n;
      return {m, std::sqrt(std::max(0.0, sq / n - m * m))};
    }
  }
  return {};
}

std::vector<double> FittedPredictor::predict(const std::vector<std::vector<double>> &x) const {
  check_width(x);
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto &r : x) {
    const double raw = (kind_ == PredictorKind::gbt && !constant_) ? boost_.predict(r)
                                                                   : raw_predict(r).mean;
    out.push_back(y_mean_ + y_scale_ * raw);
  }
  return out;
}

std::vector<Prediction> FittedPredictor::predict_with_uncertainty(
    const std::vector<std::vector<double>> &x) const {
  check_width(x);
  std::vector<Prediction> out;
  out.reserve(x.size());
  for (const auto &r : x) {
    const auto raw = raw_predict(r);
    out.push_back({y_mean_ + y_scale_ * raw.mean, y_scale_ * raw.spread});
  }
  return out;
}

std::vector<double> FittedPredictor::member_predictions(const std::vector<double> &features) const {
  std::vector<double> out;
  if (kind_ != PredictorKind::rf || constant_) return out;
  for (const auto &t : forest_) out.push_back(t.predict(features));
  return out;
}

}  // namespace archbench
