#include "chaintopo/filtration.hpp"

#include <algorithm>
#include <cmath>

#include "chaintopo/error.hpp"
#include "chaintopo/format.hpp"

namespace chaintopo {

FlScales::FlScales(std::vector<std::int64_t> satoshi) : values_(std::move(satoshi)) {
  if (values_.empty()) throw ValidationError("filtration needs at least one scale");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0) throw ValidationError("filtration scales must be non-negative");
    if (i > 0 && values_[i] <= values_[i - 1]) {
      throw ValidationError("filtration scales must be strictly increasing");
    }
  }
}

FlScales FlScales::from_btc(std::span<const double> btc) {
  std::vector<std::int64_t> sat;
  sat.reserve(btc.size());
  for (double b : btc) {
    if (!std::isfinite(b)) throw ValidationError("filtration scale is not finite");
    sat.push_back(std::llround(b * static_cast<double>(kSatoshiPerBtc)));
  }
  return FlScales(std::move(sat));
}

FlScales FlScales::defaults() {
  static constexpr double kBtc[] = {0, 10, 20, 30, 40, 50};
  return from_btc(kBtc);
}

FlFeatures fl_features(const WindowSnapshot& snap, const FlScales& scales) {
  FlFeatures out;
  out.day = snap.day();
  out.dim = snap.dim();
  out.scales.assign(scales.values().begin(), scales.values().end());
  const std::size_t cells = snap.occurrences().size();
  out.blocks.assign(scales.size(), std::vector<std::uint64_t>(cells, 0));
  for (std::size_t c = 0; c < cells; ++c) {
    // Cell amounts are sorted, so the count with amount >= eps is a suffix length.
    const auto amounts = snap.cell_amounts(c);
    for (std::size_t s = 0; s < scales.size(); ++s) {
      const auto first = std::lower_bound(amounts.begin(), amounts.end(), scales.values()[s]);
      out.blocks[s][c] = static_cast<std::uint64_t>(amounts.end() - first);
    }
  }
  return out;
}

std::vector<double> flatten(const FlFeatures& features) {
  std::vector<double> out;
  const std::size_t cells = static_cast<std::size_t>(features.dim) * features.dim;
  out.reserve(features.blocks.size() * cells);
  for (const auto& block : features.blocks) {
    for (std::uint64_t v : block) out.push_back(static_cast<double>(v));
  }
  return out;
}

std::vector<std::string> fl_column_names(const FlScales& scales, int dim) {
  std::vector<std::string> names;
  names.reserve(scales.size() * static_cast<std::size_t>(dim) * dim);
  for (std::int64_t eps : scales.values()) {
    const std::string prefix = "fl_" + format_btc(eps) + "_";
    for (int i = 1; i <= dim; ++i) {
      for (int o = 1; o <= dim; ++o) {
        names.push_back(prefix + std::to_string(i) + "_" + std::to_string(o));
      }
    }
  }
  return names;
}

}  // namespace chaintopo
