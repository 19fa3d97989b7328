#pragma once

#include <map>
#include <vector>

#include "chaintopo/backtest.hpp"

namespace chaintopo {

struct GridSpec {
  std::vector<FeatureKind> kinds{FeatureKind::Baseline};
  std::vector<RegressorSpec> regressors{RegressorSpec{}};
  std::vector<int> windows{3, 5, 7};
  std::vector<int> horizons{1, 2, 5, 7, 10, 15, 20, 25, 30};
  std::vector<int> lengths{25, 50, 100, 200};
  std::vector<int> d2s{0};
  std::optional<Date> eval_start;
  std::optional<Date> eval_end;
  std::uint64_t seed = 0;
  int retrain_every = 1;
  Target target = Target::Level;
};

// Cartesian product of the grid; cells with l < w + h + 1 are skipped.
std::vector<BacktestConfig> expand_grid(const GridSpec& grid);

// Orders by rmse, then (w, h, l, d2, kind, regressor label).
void rank_reports(std::vector<BacktestReport>& reports);

// Evaluates every cell against the series of its feature kind and returns the
// reports ranked. `jobs` bounds the number of cells run concurrently.
std::vector<BacktestReport> grid_search(const GridSpec& grid,
                                        const std::map<FeatureKind, FeatureSeries>& series,
                                        int jobs = 1);

// Lowest-rmse report per (feature kind, regressor kind, w, h), ranked.
std::vector<BacktestReport> best_per_cell(const std::vector<BacktestReport>& reports);

// Sets gain_vs_baseline on each non-baseline report from the best baseline-kind
// report with the same regressor kind, w and h.
void attach_gains(std::vector<BacktestReport>& reports);

}  // namespace chaintopo
