#include "chaintopo/grid_search.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "chaintopo/error.hpp"
#include "chaintopo/pipeline.hpp"

namespace chaintopo {

std::vector<BacktestConfig> expand_grid(const GridSpec& grid) {
  if (grid.kinds.empty() || grid.regressors.empty() || grid.windows.empty() ||
      grid.horizons.empty() || grid.lengths.empty() || grid.d2s.empty()) {
    throw ValidationError("grid search needs every grid to be nonempty");
  }
  std::vector<BacktestConfig> cells;
  for (FeatureKind kind : grid.kinds) {
    for (const auto& reg : grid.regressors) {
      for (int w : grid.windows) {
        for (int h : grid.horizons) {
          for (int l : grid.lengths) {
            if (l < w + h + 1) continue;
            for (int d2 : grid.d2s) {
              BacktestConfig c;
              c.feature_kind = kind;
              c.regressor = reg;
              c.window = w;
              c.horizon = h;
              c.training_length = l;
              c.d2 = d2;
              c.eval_start = grid.eval_start;
              c.eval_end = grid.eval_end;
              c.seed = grid.seed;
              c.retrain_every = grid.retrain_every;
              c.target = grid.target;
              cells.push_back(c);
            }
          }
        }
      }
    }
  }
  return cells;
}

namespace {

auto sort_key(const BacktestReport& r) {
  const auto& c = r.config;
  return std::make_tuple(r.rmse, c.window, c.horizon, c.training_length, c.d2,
                         static_cast<int>(c.feature_kind), r.model_label);
}

}  // namespace

void rank_reports(std::vector<BacktestReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const BacktestReport& a, const BacktestReport& b) { return sort_key(a) < sort_key(b); });
}

std::vector<BacktestReport> grid_search(const GridSpec& grid,
                                        const std::map<FeatureKind, FeatureSeries>& series, int jobs) {
  const auto cells = expand_grid(grid);
  for (FeatureKind kind : grid.kinds) {
    if (!series.contains(kind)) {
      throw ValidationError("no feature series for kind " + std::string(to_string(kind)));
    }
  }
  std::vector<BacktestReport> reports(cells.size());
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    BacktestOptions opts;
    opts.cell_id = i;
    reports[i] = run_backtest(cells[i], series.at(cells[i].feature_kind), opts);
  });
  rank_reports(reports);
  return reports;
}

std::vector<BacktestReport> best_per_cell(const std::vector<BacktestReport>& reports) {
  std::map<std::tuple<int, int, int, int>, const BacktestReport*> best;
  for (const auto& r : reports) {
    const auto key = std::make_tuple(static_cast<int>(r.config.feature_kind),
                                     static_cast<int>(r.config.regressor.kind), r.config.window,
                                     r.config.horizon);
    auto it = best.find(key);
    if (it == best.end() || sort_key(r) < sort_key(*it->second)) best[key] = &r;
  }
  std::vector<BacktestReport> out;
  out.reserve(best.size());
  for (const auto& [key, r] : best) out.push_back(*r);
  rank_reports(out);
  return out;
}

void attach_gains(std::vector<BacktestReport>& reports) {
  std::map<std::tuple<int, int, int>, const BacktestReport*> baselines;
  for (const auto& r : reports) {
    if (r.config.feature_kind != FeatureKind::Baseline || r.model_label == "persistence") continue;
    const auto key = std::make_tuple(static_cast<int>(r.config.regressor.kind), r.config.window,
                                     r.config.horizon);
    auto it = baselines.find(key);
    if (it == baselines.end() || sort_key(r) < sort_key(*it->second)) baselines[key] = &r;
  }
  std::vector<std::pair<double, std::string>> found(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (r.model_label == "persistence") continue;
    const auto key = std::make_tuple(static_cast<int>(r.config.regressor.kind), r.config.window,
                                     r.config.horizon);
    auto it = baselines.find(key);
    if (it == baselines.end() || !(it->second->rmse > 0.0)) {
      found[i] = {0.0, ""};
      continue;
    }
    found[i] = {gain(r.rmse, it->second->rmse), it->second->config.label()};
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (found[i].second.empty()) continue;
    reports[i].gain_vs_baseline = found[i].first;
    reports[i].baseline_label = found[i].second;
  }
}

}  // namespace chaintopo
