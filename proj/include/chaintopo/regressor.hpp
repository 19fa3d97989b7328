#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace chaintopo {

enum class RegressorKind { Enet, Rf };

RegressorKind parse_regressor_kind(std::string_view name);
std::string_view to_string(RegressorKind kind);

// Default hyperparameter grids.
inline constexpr double kEnetL1Grid[] = {0.0001, 0.001, 0.01, 0.1, 1.0, 10.0};
inline constexpr double kEnetL2Grid[] = {0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0};
inline constexpr int kTreeGrid[] = {10, 50, 100, 200, 300, 400, 500, 1000};

struct RegressorSpec {
  RegressorKind kind = RegressorKind::Enet;
  // enet
  double l1 = 0.001;
  double l2 = 0.001;
  // rf; max_depth 0 = unlimited, mtry 0 = ceil(d / 3)
  int n_trees = 100;
  int max_depth = 0;
  int min_leaf = 2;
  int mtry = 0;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  // Stable text form, e.g. "enet(l1=0.001,l2=0.001)" or "rf(trees=100)".
  std::string label() const;
  void validate() const;
};

class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual RegressorKind kind() const = 0;
  virtual std::size_t input_dim() const = 0;
  // Throws ValidationError when x.size() != input_dim().
  virtual double predict(std::span<const double> x) const = 0;
};

// Rows of X are samples.
std::unique_ptr<const Regressor> fit_regressor(const RegressorSpec& spec, const Eigen::MatrixXd& X,
                                               std::span<const double> y);

}  // namespace chaintopo
