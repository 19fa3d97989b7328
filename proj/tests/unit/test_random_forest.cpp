#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "chaintopo/error.hpp"
#include "chaintopo/random_forest.hpp"
#include "chaintopo/rng.hpp"

using namespace chaintopo;

namespace {

struct Data {
  Eigen::MatrixXd X;
  std::vector<double> y;
};

Data noisy_data(std::uint64_t seed, int n = 60, int d = 5) {
  Rng rng(seed);
  Data data{Eigen::MatrixXd(n, d), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) data.X(i, j) = rng.uniform() * 10.0;
    data.y[i] = (data.X(i, 0) > 5 ? 10.0 : -3.0) + data.X(i, 1) + 0.1 * rng.normal();
  }
  return data;
}

double predict_row(const RandomForest& f, const Eigen::MatrixXd& X, int i) {
  const Eigen::VectorXd row = X.row(i).transpose();
  return f.predict(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
}

}  // namespace

TEST(RandomForest, PredictionsWithinTargetRange) {
  const auto data = noisy_data(1);
  const auto f = rf_fit(data.X, data.y, {.n_trees = 30, .seed = 4});
  const auto [lo, hi] = std::minmax_element(data.y.begin(), data.y.end());
  Rng rng(99);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> x(5);
    for (auto& v : x) v = rng.uniform() * 14.0 - 2.0;
    const double p = f.predict(x);
    EXPECT_GE(p, *lo);
    EXPECT_LE(p, *hi);
  }
  EXPECT_EQ(f.tree_count(), 30u);
}

TEST(RandomForest, SeededDeterminism) {
  const auto data = noisy_data(2);
  const auto a = rf_fit(data.X, data.y, {.n_trees = 10, .seed = 8});
  const auto b = rf_fit(data.X, data.y, {.n_trees = 10, .seed = 8});
  const auto c = rf_fit(data.X, data.y, {.n_trees = 10, .seed = 9});
  bool differs = false;
  for (int i = 0; i < data.X.rows(); ++i) {
    EXPECT_EQ(predict_row(a, data.X, i), predict_row(b, data.X, i));
    differs |= predict_row(a, data.X, i) != predict_row(c, data.X, i);
  }
  EXPECT_TRUE(differs);
}

TEST(RandomForest, SingleFullTreeInterpolatesTraining) {
  const auto data = noisy_data(3, 10, 3);
  const auto f = rf_fit(data.X, data.y, {.n_trees = 1, .min_leaf = 1, .mtry = 3, .bootstrap = false});
  for (int i = 0; i < data.X.rows(); ++i) EXPECT_DOUBLE_EQ(predict_row(f, data.X, i), data.y[i]);
}

TEST(RandomForest, LeavesRespectMinimumSize) {
  const auto data = noisy_data(4, 50, 2);
  const auto f = rf_fit(data.X, data.y, {.n_trees = 1, .min_leaf = 5, .mtry = 2, .bootstrap = false});
  // Count training rows per leaf by routing each through the tree.
  const auto& tree = f.tree(0);
  std::vector<int> hits(tree.size(), 0);
  for (int i = 0; i < data.X.rows(); ++i) {
    int node = 0;
    while (tree[node].feature >= 0) {
      node = data.X(i, tree[node].feature) <= tree[node].threshold ? tree[node].left : tree[node].right;
    }
    ++hits[node];
  }
  for (std::size_t n = 0; n < tree.size(); ++n) {
    if (tree[n].feature < 0) EXPECT_GE(hits[n], 5);
  }
}

TEST(RandomForest, DepthLimitAndConstantTarget) {
  const auto data = noisy_data(5);
  const auto stump = rf_fit(data.X, data.y, {.n_trees = 1, .max_depth = 1, .mtry = 5, .bootstrap = false});
  EXPECT_EQ(stump.tree(0).size(), 3u);
  const std::vector<double> flat(data.y.size(), 4.25);
  const auto f = rf_fit(data.X, flat, {.n_trees = 5});
  EXPECT_EQ(predict_row(f, data.X, 0), 4.25);
}

TEST(RandomForest, Validation) {
  const auto data = noisy_data(6);
  EXPECT_THROW(rf_fit(data.X, data.y, {.n_trees = 0}), ValidationError);
  EXPECT_THROW(rf_fit(data.X, std::vector<double>(2), {}), ValidationError);
  const auto f = rf_fit(data.X, data.y, {.n_trees = 2});
  EXPECT_THROW(f.predict(std::vector<double>(2)), ValidationError);
}
