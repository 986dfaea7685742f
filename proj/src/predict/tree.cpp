#include "predict/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"

namespace archbench {

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>> &rows) {
  FeatureMatrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows.front().size();
  m.data.reserve(m.rows * m.cols);
  for (const auto &r : rows) {
    if (r.size() != m.cols) throw Error(ErrorCode::parameter, "feature rows differ in width");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  return m;
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix &x, std::span<const double> grad,
              std::span<const double> hess, const TreeParams &params, Rng &rng)
      : x_(x), grad_(grad), hess_(hess), params_(params), rng_(rng) {}

  int build(std::vector<std::size_t> &rows, std::size_t begin, std::size_t end, int depth) {
    double g = 0, h = 0;
    for (std::size_t i = begin; i < end; ++i) {
      g += grad_[rows[i]];
      h += hess_[rows[i]];
    }
    const int id = static_cast<int>(tree_.nodes_.size());
    tree_.nodes_.push_back({});
    tree_.nodes_[static_cast<std::size_t>(id)].value = leaf_weight(g, h);
    if (depth >= params_.max_depth ||
        end - begin < 2 * static_cast<std::size_t>(std::max(1, params_.min_leaf))) {
      return id;
    }
    const Split best = find_split(rows, begin, end, g, h);
    if (best.feature < 0) return id;

    auto mid_it = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                 rows.begin() + static_cast<std::ptrdiff_t>(end),
                                 [&](std::size_t r) {
                                   return x_.at(r, static_cast<std::size_t>(best.feature)) <
                                          best.threshold;
                                 });
    const auto mid = static_cast<std::size_t>(mid_it - rows.begin());
    const int left = build(rows, begin, mid, depth + 1);
    const int right = build(rows, mid, end, depth + 1);
    auto &node = tree_.nodes_[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  RegressionTree take() { return std::move(tree_); }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
  };

  double leaf_weight(double g, double h) const {
    const double denom = h + params_.l2;
    return denom > 0 ? -g / denom : 0.0;
  }

  double score(double g, double h) const {
    const double denom = h + params_.l2;
    return denom > 0 ? g * g / denom : 0.0;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t total = x_.cols;
    std::size_t k = static_cast<std::size_t>(
        std::ceil(params_.feature_frac * static_cast<double>(total)));
    k = std::clamp<std::size_t>(k, 1, total);
    if (k == total) {
      std::vector<std::size_t> all(total);
      std::iota(all.begin(), all.end(), 0);
      return all;
    }
    auto picked = rng_.sample_without_replacement(total, k);
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  Split find_split(const std::vector<std::size_t> &rows, std::size_t begin,
                   std::size_t end, double g_total, double h_total) {
    Split best;
    const double parent = score(g_total, h_total);
    const auto min_leaf = static_cast<std::size_t>(std::max(1, params_.min_leaf));
    std::vector<std::pair<double, std::size_t>> column(end - begin);
    for (std::size_t f : candidate_features()) {
      for (std::size_t i = begin; i < end; ++i) column[i - begin] = {x_.at(rows[i], f), rows[i]};
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      double gl = 0, hl = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        gl += grad_[column[i].second];
        hl += hess_[column[i].second];
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        if (n_left < min_leaf || column.size() - n_left < min_leaf) continue;
        const double gain =
            0.5 * (score(gl, hl) + score(g_total - gl, h_total - hl) - parent) -
            params_.min_split_gain;
        if (gain > best.gain + 1e-12) {
          best.feature = static_cast<int>(f);
          best.threshold = 0.5 * (column[i].first + column[i + 1].first);
          best.gain = gain;
        }
      }
    }
    return best;
  }

  const FeatureMatrix &x_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  const TreeParams &params_;
  Rng &rng_;
  RegressionTree tree_;
};

RegressionTree RegressionTree::fit(const FeatureMatrix &x, std::span<const double> grad,
                                   std::span<const double> hess,
                                   std::span<const std::size_t> rows,
                                   const TreeParams &params, Rng &rng) {
  if (rows.empty()) throw Error(ErrorCode::parameter, "tree needs at least one sample");
  TreeBuilder builder(x, grad, hess, params, rng);
  std::vector<std::size_t> work(rows.begin(), rows.end());
  builder.build(work, 0, work.size(), 0);
  return builder.take();
}

double RegressionTree::predict(std::span<const double> features) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const auto &n = nodes_[i];
    i = static_cast<std::size_t>(features[static_cast<std::size_t>(n.feature)] < n.threshold
                                     ? n.left
                                     : n.right);
  }
  return nodes_[i].value;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node &n) { return n.feature < 0; }));
}

}  // namespace archbench
