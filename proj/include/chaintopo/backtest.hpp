#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaintopo/date.hpp"
#include "chaintopo/features.hpp"
#include "chaintopo/pca.hpp"
#include "chaintopo/regressor.hpp"

namespace chaintopo {

// Daily feature vectors x_t and prices y_t on consecutive days.
struct FeatureSeries {
  FeatureKind kind = FeatureKind::Baseline;
  std::vector<std::string> names;
  std::vector<Date> days;
  std::vector<std::vector<double>> x;
  std::vector<double> y;

  std::size_t size() const { return days.size(); }
  std::size_t dim() const { return names.size(); }
};

enum class Target { Level, LogReturn };

Target parse_target(std::string_view name);
std::string_view to_string(Target t);

struct BacktestConfig {
  FeatureKind feature_kind = FeatureKind::Baseline;
  RegressorSpec regressor;
  int window = 3;
  int horizon = 1;
  int training_length = 25;
  // PCA dimension; 0 = full. Capped at min(training pairs, input width).
  int d2 = 0;
  std::optional<Date> eval_start;
  std::optional<Date> eval_end;
  std::uint64_t seed = 0;
  int retrain_every = 1;
  Target target = Target::Level;

  // w >= 1, h >= 1, l >= w + h + 1, d2 >= 0, retrain_every >= 1.
  void validate() const;
  std::string label() const;
};

// Read-only view of a FeatureSeries that records the largest day index read.
class HistoryAccess {
 public:
  explicit HistoryAccess(const FeatureSeries& series) : series_(&series) {}

  std::span<const double> features(std::size_t i);
  double price(std::size_t i);
  std::size_t size() const { return series_->size(); }
  std::size_t dim() const { return series_->dim(); }

  // nullopt until something has been read.
  std::optional<std::size_t> max_index() const;
  void reset() { max_ = kNone; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  void touch(std::size_t i);

  const FeatureSeries* series_;
  std::size_t max_ = kNone;
};

// [x_{t-w-h+1}, ..., x_{t-h}; y_{t-w-h+1}, ..., y_{t-h}], length w * (d + 1).
// Throws ValidationError when t - w - h + 1 < 0.
std::vector<double> build_input_row(HistoryAccess& hist, std::size_t t, int w, int h);

struct TrainingPair {
  std::vector<double> x;
  double y = 0.0;
};

// Input row for day t together with its target y_t.
TrainingPair build_training_pair(HistoryAccess& hist, std::size_t t, int w, int h);

// Earliest day index the backtest can predict: the l-day training history
// ending at t - h must start at index >= 0.
std::size_t first_predictable_index(const BacktestConfig& cfg);

struct DayFit {
  std::shared_ptr<const Regressor> model;
  PcaProjection pca;
  // Day indices whose pairs made up the training set, ascending.
  std::vector<std::size_t> target_indices;
};

// Trains on the l days ending at t - h: local days 1..l map to global indices
// t-h-l+1 .. t-h and pairs are built for local t' in [h + w, l], giving
// l - h - w + 1 pairs. PCA is fitted on the stacked rows and the model on the
// projected rows.
DayFit fit_for_day(HistoryAccess& hist, std::size_t t, const BacktestConfig& cfg,
                   std::uint64_t seed);

double predict_for_day(HistoryAccess& hist, std::size_t t, const BacktestConfig& cfg,
                       const DayFit& fit);

struct PredictionRow {
  Date date;
  double predicted = 0.0;
  double actual = 0.0;
};

struct BacktestReport {
  BacktestConfig config;
  std::string model_label;  // regressor label, or "persistence"
  std::vector<PredictionRow> rows;
  double rmse = 0.0;
  std::optional<double> gain_vs_baseline;
  std::string baseline_label;
};

// Called once per prediction with the day index predicted and the largest day
// index read while fitting and predicting it.
class LookaheadProbe {
 public:
  virtual ~LookaheadProbe() = default;
  virtual void on_prediction(std::size_t target_index, std::size_t max_index_read) = 0;
};

struct BacktestOptions {
  LookaheadProbe* probe = nullptr;  // calls are serialized
  int jobs = 1;
  // Processes evaluation days in a seeded random order. The report must not change.
  std::optional<std::uint64_t> shuffle_seed;
  // Distinguishes grid cells when deriving per-day seeds.
  std::uint64_t cell_id = 0;
};

struct EvalSpan {
  std::size_t first = 0;
  std::size_t last = 0;
};

// Day indices [first, last] evaluated for `cfg` on consecutive `days`. Throws
// ValidationError if the series cannot cover them, naming the first missing day.
EvalSpan evaluation_span(const BacktestConfig& cfg, std::span<const Date> days);

// Evaluation days default to [first predictable day, last day]. Throws
// ValidationError if the span is not covered, naming the first missing day.
BacktestReport run_backtest(const BacktestConfig& cfg, const FeatureSeries& series,
                            const BacktestOptions& opts = {});

// Price-only baseline: predicts y_{t-h} for day t over the same evaluation days.
BacktestReport persistence_backtest(const BacktestConfig& cfg, const FeatureSeries& series);

double rmse(std::span<const double> predicted, std::span<const double> actual);
double rmse(const BacktestReport& report);
// 100 * (1 - rmse_model / rmse_baseline); throws when rmse_baseline <= 0.
double gain(double rmse_model, double rmse_baseline);

}  // namespace chaintopo
