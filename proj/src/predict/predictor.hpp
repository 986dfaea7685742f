#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "common/rng.hpp"
#include "predict/tree.hpp"

namespace archbench {

enum class PredictorKind { gp, rf, gbt };

const char *predictor_kind_name(PredictorKind kind);
PredictorKind parse_predictor_kind(const std::string &text);

struct GpParams {
  double lengthscale = 2.0;
  double signal = 1.0;
  double noise = 1e-2;
  std::size_t max_points = 1000;  // larger training sets are subsampled
};

struct ForestParams {
  int n_trees = 100;
  int max_depth = 16;
  int min_leaf = 1;
  double feature_frac = 1.0 / 3.0;
  bool bootstrap = true;
};

struct BoostParams {
  int n_rounds = 200;
  int max_depth = 3;
  double learning_rate = 0.1;
  double l2 = 1.0;
  double min_split_gain = 0.0;
  int min_leaf = 1;
  // Bootstrap refits used for predict_with_uncertainty; 0 or 1 = none.
  int bootstrap_models = 0;
};

struct PredictorConfig {
  PredictorKind kind = PredictorKind::gbt;
  GpParams gp;
  ForestParams rf;
  BoostParams gbt;

  /// Throws Error(parameter) when a hyperparameter is out of range.
  void validate() const;
};

void to_json(nlohmann::json &j, const PredictorConfig &cfg);
void from_json(const nlohmann::json &j, PredictorConfig &cfg);

struct Prediction {
  double mean = 0.0;
  double spread = 0.0;
};

/// Trained model over fixed-width encodings. Immutable after fit; safe to
/// share across threads for prediction.
class FittedPredictor {
 public:
  /// Targets are standardized before fitting and de-standardized on output.
  /// Constant targets give a constant predictor for every kind.
  static FittedPredictor fit(const PredictorConfig &cfg,
                             const std::vector<std::vector<double>> &x,
                             const std::vector<double> &y, Rng &rng);

  PredictorKind kind() const { return kind_; }
  std::size_t width() const { return width_; }

  std::vector<double> predict(const std::vector<std::vector<double>> &x) const;

  /// gp: posterior mean and standard deviation. rf: mean and standard
  /// deviation over trees. gbt: over bootstrap refits (zero spread without
  /// refits).
  std::vector<Prediction> predict_with_uncertainty(
      const std::vector<std::vector<double>> &x) const;

  /// Per-tree raw predictions (rf only; empty otherwise), before
  /// de-standardization.
  std::vector<double> member_predictions(const std::vector<double> &features) const;

  /// Training loss (mean squared error on standardized targets) after each
  /// boosting round; gbt only.
  const std::vector<double> &boosting_loss() const { return boost_loss_; }

  double target_mean() const { return y_mean_; }
  double target_scale() const { return y_scale_; }

  struct GpState;
  struct BoostModel {
    std::vector<RegressionTree> trees;
    double learning_rate = 0.1;
    double predict(std::span<const double> features) const;
  };

 private:
  void check_width(const std::vector<std::vector<double>> &x) const;
  Prediction raw_predict(const std::vector<double> &features) const;

  PredictorKind kind_ = PredictorKind::gbt;
  std::size_t width_ = 0;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  bool constant_ = false;

  std::shared_ptr<const GpState> gp_;
  std::vector<RegressionTree> forest_;
  BoostModel boost_;
  std::vector<BoostModel> boost_refits_;
  std::vector<double> boost_loss_;
};

}  // namespace archbench
