#include "chaintopo/features.hpp"

#include "chaintopo/error.hpp"
#include "chaintopo/log.hpp"

namespace chaintopo {

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "baseline") return FeatureKind::Baseline;
  if (name == "fl") return FeatureKind::Fl;
  if (name == "betti") return FeatureKind::Betti;
  if (name == "betti_deriv") return FeatureKind::BettiDeriv;
  throw ValidationError("unknown feature kind '" + std::string(name) + "'");
}

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Baseline: return "baseline";
    case FeatureKind::Fl: return "fl";
    case FeatureKind::Betti: return "betti";
    case FeatureKind::BettiDeriv: return "betti_deriv";
  }
  return "?";
}

FeatureVector baseline_features(double price, const WindowSnapshot& snap) {
  FeatureVector fv;
  fv.day = snap.day();
  fv.kind = FeatureKind::Baseline;
  fv.values = {price, static_cast<double>(snap.total_transactions())};
  fv.names = {"price", "total_tx"};
  return fv;
}

FeatureVector fl_feature_vector(double price, const WindowSnapshot& snap, const FlFeatures& fl) {
  FeatureVector fv = baseline_features(price, snap);
  fv.kind = FeatureKind::Fl;
  const auto flat = flatten(fl);
  fv.values.insert(fv.values.end(), flat.begin(), flat.end());
  FlScales scales(fl.scales);
  const auto names = fl_column_names(scales, fl.dim);
  fv.names.insert(fv.names.end(), names.begin(), names.end());
  return fv;
}

std::vector<std::string> betti_column_names(std::size_t n_scales, bool with_derivatives, int order) {
  std::vector<std::string> names;
  auto block = [&](const char* prefix, std::size_t len) {
    for (std::size_t k = 1; k <= len; ++k) names.push_back(prefix + std::to_string(k));
  };
  block("b0_", n_scales);
  block("b1_", n_scales);
  if (with_derivatives) {
    if (n_scales <= static_cast<std::size_t>(order)) {
      throw ValidationError("derivative order must be smaller than the number of scales");
    }
    block("db0_", n_scales - static_cast<std::size_t>(order));
    block("db1_", n_scales - static_cast<std::size_t>(order));
  }
  return names;
}

FeatureVector betti_feature_vector(double price, const WindowSnapshot& snap,
                                   const std::optional<BettiCurves>& curves, std::size_t n_scales,
                                   bool with_derivatives, int order) {
  FeatureVector fv = baseline_features(price, snap);
  fv.kind = with_derivatives ? FeatureKind::BettiDeriv : FeatureKind::Betti;
  const auto names = betti_column_names(n_scales, with_derivatives, order);
  fv.names.insert(fv.names.end(), names.begin(), names.end());

  if (!curves) {
    log::warn("no active chainlets on " + snap.day().iso() + "; topology features set to zero");
    fv.values.resize(fv.names.size(), 0.0);
    return fv;
  }
  if (curves->beta0.size() != n_scales || curves->beta1.size() != n_scales) {
    throw ValidationError("Betti curves do not match the scale grid length");
  }
  auto append = [&](std::span<const std::int64_t> v) {
    for (std::int64_t x : v) fv.values.push_back(static_cast<double>(x));
  };
  append(curves->beta0);
  append(curves->beta1);
  if (with_derivatives) {
    append(betti_derivative(curves->beta0, order));
    append(betti_derivative(curves->beta1, order));
  }
  return fv;
}

BasicDiagnostics basic_diagnostics(double price, const WindowSnapshot& snap) {
  BasicDiagnostics d;
  d.day = snap.day();
  d.price = price;
  d.total_tx = snap.total_transactions();
  std::int64_t total = 0;
  for (std::int64_t a : snap.amounts()) total += a;
  d.total_tx_amount_btc = static_cast<double>(total) / static_cast<double>(kSatoshiPerBtc);
  d.mean_tx_amount_btc = d.total_tx == 0 ? 0.0 : d.total_tx_amount_btc / static_cast<double>(d.total_tx);
  return d;
}

}  // namespace chaintopo
