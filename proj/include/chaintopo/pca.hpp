#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace chaintopo {

// Projection onto the leading principal directions of centered training rows.
class PcaProjection {
 public:
  int dimension() const { return static_cast<int>(components_.cols()); }
  const Eigen::VectorXd& means() const { return means_; }
  // d x d2, orthonormal columns; the largest-magnitude entry of each column is positive.
  const Eigen::MatrixXd& components() const { return components_; }
  // Share of total variance per component, non-increasing.
  const std::vector<double>& explained_variance_ratio() const { return explained_; }

  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd transform(std::span<const double> x) const;
  Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& scores) const;

 private:
  friend PcaProjection pca_fit(const Eigen::MatrixXd&, int);

  Eigen::VectorXd means_;
  Eigen::MatrixXd components_;
  std::vector<double> explained_;
};

// Throws ValidationError unless 1 <= d2 <= min(rows, cols).
PcaProjection pca_fit(const Eigen::MatrixXd& X, int d2);

}  // namespace chaintopo
