#include "chaintopo/regressor.hpp"

#include "chaintopo/enet.hpp"
#include "chaintopo/error.hpp"
#include "chaintopo/format.hpp"
#include "chaintopo/random_forest.hpp"

namespace chaintopo {

RegressorKind parse_regressor_kind(std::string_view name) {
  if (name == "enet") return RegressorKind::Enet;
  if (name == "rf") return RegressorKind::Rf;
  throw ValidationError("unknown regressor '" + std::string(name) + "'");
}

std::string_view to_string(RegressorKind kind) {
  return kind == RegressorKind::Enet ? "enet" : "rf";
}

std::string RegressorSpec::label() const {
  if (kind == RegressorKind::Enet) {
    return "enet(l1=" + format_double(l1) + ",l2=" + format_double(l2) + ")";
  }
  std::string out = "rf(trees=" + std::to_string(n_trees);
  if (max_depth != 0) out += ",depth=" + std::to_string(max_depth);
  if (min_leaf != 2) out += ",leaf=" + std::to_string(min_leaf);
  if (mtry != 0) out += ",mtry=" + std::to_string(mtry);
  if (!bootstrap) out += ",nobootstrap";
  return out + ")";
}

void RegressorSpec::validate() const {
  if (kind == RegressorKind::Enet) {
    if (!(l1 >= 0.0) || !(l2 >= 0.0)) throw ValidationError("enet penalties must be >= 0");
  } else {
    if (n_trees < 1) throw ValidationError("rf n_trees must be >= 1");
    if (min_leaf < 1) throw ValidationError("rf min_leaf must be >= 1");
    if (max_depth < 0 || mtry < 0) throw ValidationError("rf max_depth and mtry must be >= 0");
  }
}

std::unique_ptr<const Regressor> fit_regressor(const RegressorSpec& spec, const Eigen::MatrixXd& X,
                                               std::span<const double> y) {
  spec.validate();
  if (spec.kind == RegressorKind::Enet) {
    EnetOptions o;
    o.l1 = spec.l1;
    o.l2 = spec.l2;
    return std::make_unique<EnetModel>(enet_fit(X, y, o));
  }
  ForestOptions o;
  o.n_trees = spec.n_trees;
  o.max_depth = spec.max_depth;
  o.min_leaf = spec.min_leaf;
  o.mtry = spec.mtry;
  o.bootstrap = spec.bootstrap;
  o.seed = spec.seed;
  return std::make_unique<RandomForest>(rf_fit(X, y, o));
}

}  // namespace chaintopo
