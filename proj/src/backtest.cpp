#include "chaintopo/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "chaintopo/error.hpp"
#include "chaintopo/pipeline.hpp"
#include "chaintopo/rng.hpp"

namespace chaintopo {

Target parse_target(std::string_view name) {
  if (name == "level") return Target::Level;
  if (name == "log-return") return Target::LogReturn;
  throw ValidationError("unknown target '" + std::string(name) + "'");
}

std::string_view to_string(Target t) { return t == Target::Level ? "level" : "log-return"; }

void BacktestConfig::validate() const {
  if (window < 1) throw ValidationError("window must be >= 1");
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  if (training_length < window + horizon + 1) {
    throw ValidationError("training length " + std::to_string(training_length) +
                          " must be >= w + h + 1 = " + std::to_string(window + horizon + 1));
  }
  if (d2 < 0) throw ValidationError("d2 must be >= 0 (0 = full)");
  if (retrain_every < 1) throw ValidationError("retrain_every must be >= 1");
  if (eval_start && eval_end && *eval_end < *eval_start) {
    throw ValidationError("evaluation span ends before it starts");
  }
  regressor.validate();
}

std::string BacktestConfig::label() const {
  return std::string(to_string(feature_kind)) + " " + regressor.label() + " w=" +
         std::to_string(window) + " h=" + std::to_string(horizon) + " l=" +
         std::to_string(training_length) + " d2=" + (d2 == 0 ? std::string("full") : std::to_string(d2));
}

void HistoryAccess::touch(std::size_t i) {
  if (i >= series_->size()) {
    throw ValidationError("day index " + std::to_string(i) + " is outside the series");
  }
  if (max_ == kNone || i > max_) max_ = i;
}

std::span<const double> HistoryAccess::features(std::size_t i) {
  touch(i);
  return series_->x[i];
}

double HistoryAccess::price(std::size_t i) {
  touch(i);
  return series_->y[i];
}

std::optional<std::size_t> HistoryAccess::max_index() const {
  if (max_ == kNone) return std::nullopt;
  return max_;
}

std::vector<double> build_input_row(HistoryAccess& hist, std::size_t t, int w, int h) {
  if (w < 1 || h < 1) throw ValidationError("window and horizon must be >= 1");
  const auto span = static_cast<std::size_t>(w + h - 1);
  if (t < span) {
    throw ValidationError("day index " + std::to_string(t) + " needs " + std::to_string(span) +
                          " earlier days of history");
  }
  const std::size_t first = t - span;
  const std::size_t last = t - static_cast<std::size_t>(h);
  std::vector<double> row;
  row.reserve(static_cast<std::size_t>(w) * (hist.dim() + 1));
  for (std::size_t i = first; i <= last; ++i) {
    const auto x = hist.features(i);
    row.insert(row.end(), x.begin(), x.end());
  }
  for (std::size_t i = first; i <= last; ++i) row.push_back(hist.price(i));
  return row;
}

TrainingPair build_training_pair(HistoryAccess& hist, std::size_t t, int w, int h) {
  TrainingPair pair;
  pair.x = build_input_row(hist, t, w, h);
  pair.y = hist.price(t);
  return pair;
}

std::size_t first_predictable_index(const BacktestConfig& cfg) {
  return static_cast<std::size_t>(cfg.training_length + cfg.horizon - 1);
}

namespace {

double target_value(HistoryAccess& hist, std::size_t t, const BacktestConfig& cfg) {
  const double y = hist.price(t);
  if (cfg.target == Target::Level) return y;
  const double base = hist.price(t - static_cast<std::size_t>(cfg.horizon));
  if (!(y > 0.0) || !(base > 0.0)) throw ValidationError("log-return target needs positive prices");
  return std::log(y / base);
}

}  // namespace

DayFit fit_for_day(HistoryAccess& hist, std::size_t t, const BacktestConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t w = static_cast<std::size_t>(cfg.window);
  const std::size_t h = static_cast<std::size_t>(cfg.horizon);
  const std::size_t l = static_cast<std::size_t>(cfg.training_length);
  if (t < first_predictable_index(cfg)) {
    throw ValidationError("day index " + std::to_string(t) + " has fewer than l=" +
                          std::to_string(l) + " days of history ending h=" + std::to_string(h) +
                          " days earlier");
  }

  // Local day j (1-based) of the training history is global index base + j - 1.
  const std::size_t base = t - h - l + 1;
  DayFit fit;
  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  for (std::size_t local = h + w; local <= l; ++local) {
    const std::size_t g = base + local - 1;
    rows.push_back(build_input_row(hist, g, cfg.window, cfg.horizon));
    targets.push_back(target_value(hist, g, cfg));
    fit.target_indices.push_back(g);
  }
  if (rows.size() < 2) throw ValidationError("fewer than 2 training pairs");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    X.row(r) = Eigen::Map<const Eigen::RowVectorXd>(rows[static_cast<std::size_t>(r)].data(), d);
  }

  const int full = static_cast<int>(std::min(n, d));
  const int d2 = cfg.d2 == 0 ? full : std::min(cfg.d2, full);
  fit.pca = pca_fit(X, d2);
  const Eigen::MatrixXd projected = fit.pca.transform(X);

  RegressorSpec spec = cfg.regressor;
  spec.seed = seed;
  fit.model = fit_regressor(spec, projected, targets);
  return fit;
}

double predict_for_day(HistoryAccess& hist, std::size_t t, const BacktestConfig& cfg, const DayFit& fit) {
  const auto row = build_input_row(hist, t, cfg.window, cfg.horizon);
  const Eigen::VectorXd z = fit.pca.transform(row);
  const double raw = fit.model->predict(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
  if (cfg.target == Target::Level) return raw;
  return hist.price(t - static_cast<std::size_t>(cfg.horizon)) * std::exp(raw);
}

EvalSpan evaluation_span(const BacktestConfig& cfg, std::span<const Date> days) {
  if (days.empty()) throw ValidationError("empty feature series");
  const std::size_t minimum = first_predictable_index(cfg);
  const Date front = days.front();
  const Date back = days.back();

  long long first = static_cast<long long>(minimum);
  if (cfg.eval_start) first = front.days_until(*cfg.eval_start);
  long long last = static_cast<long long>(days.size()) - 1;
  if (cfg.eval_end) last = front.days_until(*cfg.eval_end);

  if (first < static_cast<long long>(minimum)) {
    const Date needed = front.plus_days(first - static_cast<long long>(minimum));
    throw ValidationError("series does not cover " + needed.iso() +
                          ", the first day of history needed for " + cfg.label());
  }
  if (last >= static_cast<long long>(days.size())) {
    throw ValidationError("series does not cover " + back.plus_days(1).iso() +
                          ", inside the evaluation span");
  }
  if (last < first) throw ValidationError("evaluation span is empty for " + cfg.label());
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

namespace {

EvalSpan resolve_span(const BacktestConfig& cfg, const FeatureSeries& series) {
  return evaluation_span(cfg, series.days);
}

}  // namespace

BacktestReport run_backtest(const BacktestConfig& cfg, const FeatureSeries& series,
                            const BacktestOptions& opts) {
  cfg.validate();
  for (const auto& x : series.x) {
    if (x.size() != series.dim()) throw ValidationError("feature rows differ in length");
  }
  const EvalSpan span = resolve_span(cfg, series);
  const std::size_t count = span.last - span.first + 1;
  const auto k = static_cast<std::size_t>(cfg.retrain_every);
  const std::size_t groups = (count + k - 1) / k;

  std::vector<std::size_t> order(groups);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (opts.shuffle_seed) {
    Rng rng(*opts.shuffle_seed);
    for (std::size_t i = groups; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  }

  std::vector<double> predicted(count);
  std::mutex probe_mutex;
  parallel_for(groups, opts.jobs, [&](std::size_t task) {
    const std::size_t g = order[task];
    const std::size_t anchor = span.first + g * k;
    HistoryAccess hist(series);
    const DayFit fit = fit_for_day(hist, anchor, cfg, derive_seed(cfg.seed, opts.cell_id, anchor));
    const std::size_t fit_max = hist.max_index().value_or(0);
    const std::size_t end = std::min(span.last + 1, anchor + k);
    for (std::size_t t = anchor; t < end; ++t) {
      hist.reset();
      predicted[t - span.first] = predict_for_day(hist, t, cfg, fit);
      if (opts.probe) {
        const std::size_t seen = std::max(fit_max, hist.max_index().value_or(0));
        std::lock_guard lock(probe_mutex);
        opts.probe->on_prediction(t, seen);
      }
    }
  });

  BacktestReport report;
  report.config = cfg;
  report.model_label = cfg.regressor.label();
  report.rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t t = span.first + i;
    report.rows.push_back({series.days[t], predicted[i], series.y[t]});
  }
  report.rmse = rmse(report);
  return report;
}

BacktestReport persistence_backtest(const BacktestConfig& cfg, const FeatureSeries& series) {
  cfg.validate();
  const EvalSpan span = resolve_span(cfg, series);
  BacktestReport report;
  report.config = cfg;
  report.model_label = "persistence";
  for (std::size_t t = span.first; t <= span.last; ++t) {
    report.rows.push_back({series.days[t], series.y[t - static_cast<std::size_t>(cfg.horizon)], series.y[t]});
  }
  report.rmse = rmse(report);
  return report;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) throw ValidationError("rmse: length mismatch");
  if (predicted.empty()) throw ValidationError("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double e = predicted[i] - actual[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

double rmse(const BacktestReport& report) {
  std::vector<double> p, a;
  p.reserve(report.rows.size());
  a.reserve(report.rows.size());
  for (const auto& r : report.rows) {
    p.push_back(r.predicted);
    a.push_back(r.actual);
  }
  return rmse(p, a);
}

double gain(double rmse_model, double rmse_baseline) {
  if (!(rmse_baseline > 0.0)) throw ValidationError("gain: baseline rmse must be > 0");
  return 100.0 * (1.0 - rmse_model / rmse_baseline);
}

}  // namespace chaintopo
