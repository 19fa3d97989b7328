#include "chaintopo/pca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "chaintopo/error.hpp"

namespace chaintopo {

PcaProjection pca_fit(const Eigen::MatrixXd& X, int d2) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n == 0 || d == 0) throw ValidationError("pca: empty data");
  if (d2 < 1 || d2 > std::min(n, d)) {
    throw ValidationError("pca: d2=" + std::to_string(d2) + " must be in [1, " +
                          std::to_string(std::min(n, d)) + "]");
  }

  PcaProjection p;
  p.means_ = X.colwise().mean().transpose();
  const Eigen::MatrixXd centered = X.rowwise() - p.means_.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  p.components_ = svd.matrixV().leftCols(d2);

  for (Eigen::Index c = 0; c < d2; ++c) {
    auto col = p.components_.col(c);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index k = 0; k < col.size(); ++k) {
      if (std::abs(col[k]) > best + 1e-12) {
        best = std::abs(col[k]);
        arg = k;
      }
    }
    if (col[arg] < 0.0) col = -col;
  }

  const double total = sv.squaredNorm();
  p.explained_.resize(static_cast<std::size_t>(d2));
  for (Eigen::Index c = 0; c < d2; ++c) {
    p.explained_[static_cast<std::size_t>(c)] = total > 0.0 ? sv[c] * sv[c] / total : 0.0;
  }
  return p;
}

Eigen::MatrixXd PcaProjection::transform(const Eigen::MatrixXd& X) const {
  if (X.cols() != means_.size()) throw ValidationError("pca: column count mismatch");
  return (X.rowwise() - means_.transpose()) * components_;
}

Eigen::VectorXd PcaProjection::transform(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != means_.size()) {
    throw ValidationError("pca: dimension mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return components_.transpose() * (xv - means_);
}

Eigen::MatrixXd PcaProjection::reconstruct(const Eigen::MatrixXd& scores) const {
  return (scores * components_.transpose()).rowwise() + means_.transpose();
}

}  // namespace chaintopo
