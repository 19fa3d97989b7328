#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaintopo/chainlet.hpp"
#include "chaintopo/filtration.hpp"
#include "chaintopo/tda.hpp"

namespace chaintopo {

enum class FeatureKind { Baseline, Fl, Betti, BettiDeriv };

FeatureKind parse_feature_kind(std::string_view name);
std::string_view to_string(FeatureKind kind);
inline constexpr FeatureKind kAllFeatureKinds[] = {FeatureKind::Baseline, FeatureKind::Fl,
                                                   FeatureKind::Betti, FeatureKind::BettiDeriv};

struct FeatureVector {
  Date day;
  FeatureKind kind = FeatureKind::Baseline;
  std::vector<double> values;
  std::vector<std::string> names;
};

// [price, total_tx]
FeatureVector baseline_features(double price, const WindowSnapshot& snap);

// [price, total_tx] ++ flatten(fl)
FeatureVector fl_feature_vector(double price, const WindowSnapshot& snap, const FlFeatures& fl);

// [price, total_tx] ++ beta0 ++ beta1 (++ d^order beta0 ++ d^order beta1).
// `curves` is empty for a window without active chainlets: topology entries are
// zero and a warning is emitted.
FeatureVector betti_feature_vector(double price, const WindowSnapshot& snap,
                                   const std::optional<BettiCurves>& curves, std::size_t n_scales,
                                   bool with_derivatives, int order);

std::vector<std::string> betti_column_names(std::size_t n_scales, bool with_derivatives, int order);

// Diagnostic-only basic features. Address-level values cannot be derived from
// the normalized transaction format and stay empty.
struct BasicDiagnostics {
  Date day;
  double price = 0.0;
  std::uint64_t total_tx = 0;
  double mean_tx_amount_btc = 0.0;
  double total_tx_amount_btc = 0.0;
  std::optional<double> mean_degree;
  std::optional<double> num_new_address;
  std::optional<double> clus_coeff;
};

BasicDiagnostics basic_diagnostics(double price, const WindowSnapshot& snap);

}  // namespace chaintopo
