#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chaintopo/chainlet.hpp"

namespace chaintopo {

// Amount thresholds in satoshi, strictly increasing.
class FlScales {
 public:
  explicit FlScales(std::vector<std::int64_t> satoshi);
  static FlScales from_btc(std::span<const double> btc);
  // 0, 10, 20, 30, 40, 50 BTC.
  static FlScales defaults();

  std::span<const std::int64_t> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<std::int64_t> values_;
};

struct FlFeatures {
  Date day;
  int dim = 0;
  std::vector<std::int64_t> scales;
  // blocks[s] is the row-major occurrence matrix keeping transactions with amount >= scales[s].
  std::vector<std::vector<std::uint64_t>> blocks;
};

FlFeatures fl_features(const WindowSnapshot& snap, const FlScales& scales);

// Block-major, then row-major within each block; length S * N^2.
std::vector<double> flatten(const FlFeatures& features);

// Matching labels `fl_<eps_btc>_<i>_<o>`.
std::vector<std::string> fl_column_names(const FlScales& scales, int dim);

}  // namespace chaintopo
