#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chaintopo/regressor.hpp"

namespace chaintopo {

struct EnetOptions {
  double l1 = 0.0;
  double l2 = 0.0;
  double tolerance = 1e-7;  // on the largest coefficient change within a sweep
  int max_sweeps = 10'000;
};

// Elastic net on internally standardized columns, solved by cyclic coordinate
// descent. Minimizes
//   (1/2n) ||y - b0 - Z b||^2 + l1 ||b||_1 + (l2/2) ||b||^2
// where Z holds the standardized columns (population standard deviation) and
// the intercept b0 is unpenalized.
class EnetModel final : public Regressor {
 public:
  RegressorKind kind() const override { return RegressorKind::Enet; }
  std::size_t input_dim() const override { return static_cast<std::size_t>(means_.size()); }
  double predict(std::span<const double> x) const override;

  // Slopes and intercept mapped back to the caller's column units.
  const Eigen::VectorXd& coefficients() const { return coef_; }
  double intercept() const { return intercept_; }

  // Solution in standardized space.
  const Eigen::VectorXd& standardized_coefficients() const { return beta_; }
  const Eigen::VectorXd& column_means() const { return means_; }
  const Eigen::VectorXd& column_scales() const { return scales_; }
  const std::vector<bool>& kept_columns() const { return kept_; }

  // Objective after each sweep (index 0 is the all-zero start).
  const std::vector<double>& objective_trace() const { return trace_; }
  double objective() const { return trace_.back(); }
  int sweeps() const { return sweeps_; }

 private:
  friend EnetModel enet_fit(const Eigen::MatrixXd&, std::span<const double>, const EnetOptions&);

  Eigen::VectorXd means_, scales_, beta_, coef_;
  std::vector<bool> kept_;
  double intercept_ = 0.0;
  std::vector<double> trace_;
  int sweeps_ = 0;
};

// Zero-variance columns are dropped (coefficient 0) with a warning.
EnetModel enet_fit(const Eigen::MatrixXd& X, std::span<const double> y, const EnetOptions& opts);

}  // namespace chaintopo
