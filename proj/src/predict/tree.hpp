#pragma once

#include <span>
#include <vector>

#include "common/rng.hpp"

namespace archbench {

/// Dense row-major feature matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  static FeatureMatrix from_rows(const std::vector<std::vector<double>> &rows);

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct TreeParams {
  int max_depth = 6;
  int min_leaf = 1;
  double l2 = 0.0;              // lambda in -G/(H+lambda)
  double min_split_gain = 0.0;  // gamma
  double feature_frac = 1.0;    // fraction of features tried per split
};

/// Second-order regression tree. With g = -y, h = 1 and lambda = 0 this is a
/// plain variance-reduction tree whose leaves hold the sample mean.
class RegressionTree {
 public:
  /// `rows` selects (with repetition, for bagging) the training samples.
  static RegressionTree fit(const FeatureMatrix &x, std::span<const double> grad,
                            std::span<const double> hess,
                            std::span<const std::size_t> rows,
                            const TreeParams &params, Rng &rng);

  double predict(std::span<const double> features) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  std::vector<Node> nodes_;

  friend class TreeBuilder;
};

}  // namespace archbench
