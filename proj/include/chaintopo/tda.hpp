#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chaintopo/chainlet.hpp"

namespace chaintopo {

// log(1 + a / 1e8), natural log.
double log_amount(std::int64_t satoshi);

// Hyndman-Fan type 7 sample quantiles Q(0..q) (linear interpolation between
// order statistics). Q(0) is the minimum and Q(q) the maximum.
struct QuantileVector {
  std::vector<double> values;
};

QuantileVector quantiles(std::span<const double> sample, int q);

// Euclidean distance between quantile vectors of equal length.
double quantile_distance(const QuantileVector& a, const QuantileVector& b);

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<ChainletKey> nodes, std::vector<double> row_major);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<ChainletKey>& nodes() const { return nodes_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * nodes_.size() + j]; }
  std::span<const double> data() const { return d_; }

 private:
  std::vector<ChainletKey> nodes_;
  std::vector<double> d_;
};

struct DistanceOptions {
  int q = 10;
  // Treat every one of the N^2 cells as a node; empty cells get the quantiles of {0}.
  bool impute_inactive = false;
};

// One node per active cell (row-major order). Throws ValidationError when the
// window has no active chainlets and imputation is off.
DistanceMatrix distance_matrix(const WindowSnapshot& snap, const DistanceOptions& opts = {});

struct BettiCurves {
  std::vector<double> scales;
  std::vector<std::int64_t> beta0;
  std::vector<std::int64_t> beta1;
};

// Rips complex of dimension one at each scale: vertices are nodes, edges join
// pairs with d <= eps. beta0 counts components; beta1 = E - V + beta0.
BettiCurves betti_curves(const DistanceMatrix& dm, std::span<const double> scales);

// Order-`order` forward difference; output is `order` shorter than the input.
std::vector<std::int64_t> betti_derivative(std::span<const std::int64_t> curve, int order);

// `s` uniformly spaced scales from the smallest positive to the largest
// distance over all matrices. Throws when every distance is zero.
std::vector<double> build_scale_grid(std::span<const DistanceMatrix> windows, int s);

}  // namespace chaintopo
