#include "chaintopo/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chaintopo/error.hpp"
#include "chaintopo/rng.hpp"

namespace chaintopo {
namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double reduction = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& X, std::span<const double> y, const ForestOptions& opts, int mtry,
              Rng& rng)
      : X_(X), y_(y), opts_(opts), mtry_(mtry), rng_(rng), features_(static_cast<std::size_t>(X.cols())) {
    std::iota(features_.begin(), features_.end(), 0);
  }

  RandomForest::Tree build(std::vector<Eigen::Index> rows) {
    rows_ = std::move(rows);
    tree_.clear();
    grow(0, rows_.size(), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(tree_.size());
    tree_.emplace_back();
    const std::size_t count = end - begin;

    double mean = 0.0;
    for (std::size_t k = begin; k < end; ++k) mean += y_[static_cast<std::size_t>(rows_[k])];
    mean /= static_cast<double>(count);
    tree_[static_cast<std::size_t>(id)].value = mean;

    const auto min_leaf = static_cast<std::size_t>(opts_.min_leaf);
    if (count < 2 * min_leaf || (opts_.max_depth > 0 && depth >= opts_.max_depth)) return id;

    const Split split = best_split(begin, end, mean);
    if (split.feature < 0) return id;

    const auto mid = static_cast<std::size_t>(
        std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                       rows_.begin() + static_cast<std::ptrdiff_t>(end),
                       [&](Eigen::Index r) { return X_(r, split.feature) <= split.threshold; }) -
        rows_.begin());

    const int left = grow(begin, mid, depth + 1);
    const int right = grow(mid, end, depth + 1);
    auto& node = tree_[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  Split best_split(std::size_t begin, std::size_t end, double mean) {
    const std::size_t count = end - begin;
    double parent_sse = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const double c = y_[static_cast<std::size_t>(rows_[k])] - mean;
      parent_sse += c * c;
    }
    Split best;
    if (parent_sse <= 0.0) return best;

    // Partial Fisher-Yates: the first mtry_ entries become this node's candidates.
    const std::size_t p = features_.size();
    for (std::size_t k = 0; k < static_cast<std::size_t>(mtry_); ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng_.below(p - k));
      std::swap(features_[k], features_[pick]);
    }

    const auto min_leaf = static_cast<std::size_t>(opts_.min_leaf);
    std::vector<std::pair<double, double>> column(count);
    for (std::size_t k = 0; k < static_cast<std::size_t>(mtry_); ++k) {
      const int f = features_[k];
      for (std::size_t r = 0; r < count; ++r) {
        const Eigen::Index row = rows_[begin + r];
        column[r] = {X_(row, f), y_[static_cast<std::size_t>(row)] - mean};
      }
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;

      double total = 0.0;
      for (const auto& c : column) total += c.second;
      // sse(left) + sse(right) = parent_sse - (sL^2 / nL + sR^2 / nR) on centered targets.
      double left_sum = 0.0;
      for (std::size_t nl = 1; nl < count; ++nl) {
        left_sum += column[nl - 1].second;
        if (nl < min_leaf || count - nl < min_leaf) continue;
        const double a = column[nl - 1].first;
        const double b = column[nl].first;
        if (!(a < b)) continue;
        const double right_sum = total - left_sum;
        const double reduction = left_sum * left_sum / static_cast<double>(nl) +
                                 right_sum * right_sum / static_cast<double>(count - nl);
        if (reduction > best.reduction) {
          double t = a + (b - a) / 2.0;
          if (!(t < b)) t = a;
          best = {f, t, reduction};
        }
      }
    }
    if (best.reduction <= 1e-12 * parent_sse) best.feature = -1;
    return best;
  }

  const Eigen::MatrixXd& X_;
  std::span<const double> y_;
  const ForestOptions& opts_;
  int mtry_;
  Rng& rng_;
  std::vector<int> features_;
  std::vector<Eigen::Index> rows_;
  RandomForest::Tree tree_;
};

}  // namespace

double RandomForest::predict_tree(std::size_t t, std::span<const double> x) const {
  const Tree& tree = trees_.at(t);
  int id = 0;
  while (tree[static_cast<std::size_t>(id)].feature >= 0) {
    const Node& node = tree[static_cast<std::size_t>(id)];
    id = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return tree[static_cast<std::size_t>(id)].value;
}

double RandomForest::predict(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw ValidationError("rf expects " + std::to_string(dim_) + " features, got " +
                          std::to_string(x.size()));
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < trees_.size(); ++t) sum += predict_tree(t, x);
  return sum / static_cast<double>(trees_.size());
}

RandomForest rf_fit(const Eigen::MatrixXd& X, std::span<const double> y, const ForestOptions& opts) {
  if (opts.n_trees < 1) throw ValidationError("rf: n_trees must be >= 1");
  if (opts.min_leaf < 1) throw ValidationError("rf: min_leaf must be >= 1");
  if (opts.max_depth < 0) throw ValidationError("rf: max_depth must be >= 0");
  if (X.rows() == 0 || X.cols() == 0) throw ValidationError("rf: empty design matrix");
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw ValidationError("rf: X has " + std::to_string(X.rows()) + " rows but y has " +
                          std::to_string(y.size()));
  }
  if (X.rows() < 2) throw ValidationError("rf: need at least 2 samples");

  const auto p = static_cast<int>(X.cols());
  int mtry = opts.mtry > 0 ? std::min(opts.mtry, p) : (p + 2) / 3;
  mtry = std::max(mtry, 1);

  RandomForest forest;
  forest.dim_ = static_cast<std::size_t>(p);
  forest.trees_.reserve(static_cast<std::size_t>(opts.n_trees));
  const Eigen::Index n = X.rows();
  for (int t = 0; t < opts.n_trees; ++t) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(t)));
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
    if (opts.bootstrap) {
      for (auto& r : rows) r = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    } else {
      std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    }
    TreeBuilder builder(X, y, opts, mtry, rng);
    forest.trees_.push_back(builder.build(std::move(rows)));
  }
  return forest;
}

}  // namespace chaintopo
