#pragma once

#include <span>

#include <Eigen/Dense>

namespace chaintopo::oracle {

struct OlsFit {
  Eigen::VectorXd slopes;
  double intercept = 0.0;
};

// Least squares with an intercept via the normal equations on an augmented design.
inline OlsFit ols_normal_equations(const Eigen::MatrixXd& X, std::span<const double> y) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd A(n, X.cols() + 1);
  A.col(0).setOnes();
  A.rightCols(X.cols()) = X;
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  const Eigen::VectorXd beta = (A.transpose() * A).ldlt().solve(A.transpose() * yv);
  return {beta.tail(X.cols()), beta(0)};
}

}  // namespace chaintopo::oracle
