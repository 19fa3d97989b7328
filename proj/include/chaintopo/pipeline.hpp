#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaintopo/backtest.hpp"
#include "chaintopo/chainlet.hpp"
#include "chaintopo/features.hpp"
#include "chaintopo/filtration.hpp"
#include "chaintopo/ingest.hpp"
#include "chaintopo/tda.hpp"

namespace chaintopo {

struct FeatureConfig {
  int dim = kDefaultDimension;
  FlScales fl_scales = FlScales::defaults();
  int q = 10;
  int s = 100;
  int order = 1;
  bool impute_inactive = false;
  // Days whose distance matrices define the Betti scale grid; defaults to all days.
  std::optional<Date> grid_start;
  std::optional<Date> grid_end;
  int jobs = 1;

  void validate() const;
};

// Snapshots, distance matrices and Betti curves shared by the feature kinds of one run.
class FeaturePipeline {
 public:
  FeaturePipeline(const DailySeries& series, FeatureConfig cfg);

  const std::vector<WindowSnapshot>& snapshots() const { return snapshots_; }
  const std::vector<double>& scale_grid();
  FeatureSeries build(FeatureKind kind);
  std::map<FeatureKind, FeatureSeries> build_all(std::span<const FeatureKind> kinds);
  std::vector<BasicDiagnostics> diagnostics() const;

 private:
  void ensure_curves();

  const DailySeries* series_;
  FeatureConfig cfg_;
  std::vector<WindowSnapshot> snapshots_;
  std::vector<std::optional<DistanceMatrix>> distances_;
  std::vector<double> grid_;
  std::vector<std::optional<BettiCurves>> curves_;
  bool curves_ready_ = false;
};

// `date` column followed by the named feature columns.
std::string features_to_csv(const FeatureSeries& fs);
std::string diagnostics_to_csv(const std::vector<BasicDiagnostics>& rows);

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads; rethrows the first exception.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace chaintopo
