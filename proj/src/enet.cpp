#include "chaintopo/enet.hpp"

#include <cmath>

#include "chaintopo/error.hpp"
#include "chaintopo/log.hpp"

namespace chaintopo {
namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double objective(const Eigen::VectorXd& r, const Eigen::VectorXd& beta, double l1, double l2) {
  const double n = static_cast<double>(r.size());
  return r.squaredNorm() / (2.0 * n) + l1 * beta.lpNorm<1>() + 0.5 * l2 * beta.squaredNorm();
}

}  // namespace

double EnetModel::predict(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw ValidationError("enet expects " + std::to_string(input_dim()) + " features, got " +
                          std::to_string(x.size()));
  }
  double out = intercept_;
  for (Eigen::Index j = 0; j < coef_.size(); ++j) {
    if (coef_[j] != 0.0) out += coef_[j] * x[static_cast<std::size_t>(j)];
  }
  return out;
}

EnetModel enet_fit(const Eigen::MatrixXd& X, std::span<const double> y, const EnetOptions& opts) {
  if (X.rows() == 0 || X.cols() == 0) throw ValidationError("enet: empty design matrix");
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw ValidationError("enet: X has " + std::to_string(X.rows()) + " rows but y has " +
                          std::to_string(y.size()));
  }
  if (X.rows() < 2) throw ValidationError("enet: need at least 2 samples");
  if (opts.l1 < 0.0 || opts.l2 < 0.0) throw ValidationError("enet: penalties must be >= 0");

  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const double nd = static_cast<double>(n);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

  EnetModel m;
  m.means_ = X.colwise().mean().transpose();
  m.scales_.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    m.scales_[j] = std::sqrt((X.col(j).array() - m.means_[j]).square().sum() / nd);
  }
  const double max_scale = p > 0 ? m.scales_.maxCoeff() : 0.0;
  m.kept_.assign(static_cast<std::size_t>(p), true);
  std::size_t dropped = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(m.scales_[j] > 1e-10 * max_scale) || m.scales_[j] == 0.0) {
      m.kept_[static_cast<std::size_t>(j)] = false;
      ++dropped;
    }
  }
  if (dropped > 0) {
    log::warn("enet: dropped " + std::to_string(dropped) + " zero-variance column(s)");
  }

  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (m.kept_[static_cast<std::size_t>(j)]) {
      Z.col(j) = (X.col(j).array() - m.means_[j]) / m.scales_[j];
    }
  }

  const double ymean = yv.mean();
  m.beta_ = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd r = yv.array() - ymean;
  m.trace_.push_back(objective(r, m.beta_, opts.l1, opts.l2));

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!m.kept_[static_cast<std::size_t>(j)]) continue;
      const double old = m.beta_[j];
      const double rho = Z.col(j).dot(r) / nd + old;
      const double next = soft_threshold(rho, opts.l1) / (1.0 + opts.l2);
      const double delta = next - old;
      if (delta != 0.0) {
        r.noalias() -= delta * Z.col(j);
        m.beta_[j] = next;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    m.trace_.push_back(objective(r, m.beta_, opts.l1, opts.l2));
    m.sweeps_ = sweep + 1;
    if (max_change < opts.tolerance) break;
  }

  m.coef_ = Eigen::VectorXd::Zero(p);
  m.intercept_ = ymean;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!m.kept_[static_cast<std::size_t>(j)]) continue;
    m.coef_[j] = m.beta_[j] / m.scales_[j];
    m.intercept_ -= m.coef_[j] * m.means_[j];
  }
  return m;
}

}  // namespace chaintopo
