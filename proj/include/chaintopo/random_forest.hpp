#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chaintopo/regressor.hpp"

namespace chaintopo {

struct ForestOptions {
  int n_trees = 100;
  int max_depth = 0;  // 0 = unlimited
  int min_leaf = 2;
  int mtry = 0;       // features tried per split; 0 = ceil(d / 3)
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

// CART regression trees (squared-error splits) on bootstrap resamples; the
// forest predicts the mean of its trees.
class RandomForest final : public Regressor {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // x[feature] <= threshold goes left
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  using Tree = std::vector<Node>;

  RegressorKind kind() const override { return RegressorKind::Rf; }
  std::size_t input_dim() const override { return dim_; }
  double predict(std::span<const double> x) const override;

  std::size_t tree_count() const { return trees_.size(); }
  double predict_tree(std::size_t tree, std::span<const double> x) const;
  const Tree& tree(std::size_t i) const { return trees_[i]; }

 private:
  friend RandomForest rf_fit(const Eigen::MatrixXd&, std::span<const double>, const ForestOptions&);

  std::size_t dim_ = 0;
  std::vector<Tree> trees_;
};

RandomForest rf_fit(const Eigen::MatrixXd& X, std::span<const double> y, const ForestOptions& opts);

}  // namespace chaintopo
