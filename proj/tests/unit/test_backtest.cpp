#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "chaintopo/backtest.hpp"
#include "chaintopo/error.hpp"
#include "chaintopo/log.hpp"

using namespace chaintopo;

namespace {

// Two features per day plus a price that depends on lagged features.
FeatureSeries toy_series(std::size_t n) {
  FeatureSeries s;
  s.kind = FeatureKind::Baseline;
  s.names = {"price", "total_tx"};
  const Date start = Date::parse("2018-01-01");
  for (std::size_t i = 0; i < n; ++i) {
    const double count = 100.0 + 10.0 * std::sin(0.9 * static_cast<double>(i)) + static_cast<double>(i % 4);
    s.days.push_back(start.plus_days(static_cast<long long>(i)));
    s.y.push_back(500.0 + 2.0 * count + 0.01 * static_cast<double>(i * i % 17));
    s.x.push_back({s.y.back(), count});
  }
  return s;
}

class RecordingProbe : public LookaheadProbe {
 public:
  void on_prediction(std::size_t target, std::size_t seen) override { calls.emplace_back(target, seen); }
  std::vector<std::pair<std::size_t, std::size_t>> calls;
};

BacktestConfig enet_config(int w, int h, int l) {
  BacktestConfig c;
  c.window = w;
  c.horizon = h;
  c.training_length = l;
  c.regressor.kind = RegressorKind::Enet;
  c.regressor.l1 = 0.01;
  c.regressor.l2 = 0.01;
  return c;
}

}  // namespace

TEST(Backtest, InputRowLayout) {
  const auto s = toy_series(20);
  HistoryAccess hist(s);
  const auto row = build_input_row(hist, 10, 3, 2);
  // Days 6, 7, 8: features first, then prices.
  ASSERT_EQ(row.size(), 3u * 3u);
  EXPECT_EQ(row[0], s.x[6][0]);
  EXPECT_EQ(row[1], s.x[6][1]);
  EXPECT_EQ(row[4], s.x[8][0]);
  EXPECT_EQ(row[5], s.x[8][1]);
  EXPECT_EQ(row[6], s.y[6]);
  EXPECT_EQ(row[8], s.y[8]);
  EXPECT_EQ(hist.max_index(), 8u);
  EXPECT_THROW(build_input_row(hist, 3, 3, 2), ValidationError);
  EXPECT_EQ(build_input_row(hist, 7, 1, 1), (std::vector<double>{s.x[6][0], s.x[6][1], s.y[6]}));
  const auto pair = build_training_pair(hist, 10, 3, 2);
  EXPECT_EQ(pair.y, s.y[10]);
  EXPECT_EQ(hist.max_index(), 10u);
}

TEST(Backtest, TrainingPairsFollowLoopEnumeration) {
  const auto s = toy_series(80);
  for (int w : {1, 3, 7}) {
    for (int h : {1, 2, 5}) {
      for (int l : {w + h + 1, 25, 40}) {
        const auto cfg = enet_config(w, h, l);
        const std::size_t t = first_predictable_index(cfg) + 3;
        // Enumerate the training loop directly: local t' = h + w .. l on the
        // history whose local day 1 is global day t - h - l + 1.
        std::vector<std::size_t> expect;
        for (int tp = h + w; tp <= l; ++tp) expect.push_back(t - h - l + static_cast<std::size_t>(tp));
        HistoryAccess hist(s);
        const auto fit = fit_for_day(hist, t, cfg, 1);
        EXPECT_EQ(fit.target_indices, expect);
        EXPECT_EQ(fit.target_indices.size(), static_cast<std::size_t>(l - h - w + 1));
        EXPECT_EQ(hist.max_index(), t - h);
      }
    }
  }
  EXPECT_EQ(first_predictable_index(enet_config(3, 1, 25)), 25u);
  HistoryAccess hist(s);
  const auto fit = fit_for_day(hist, 25, enet_config(3, 1, 25), 0);
  EXPECT_EQ(fit.target_indices.size(), 22u);
  EXPECT_EQ(fit.target_indices.front(), 3u);
  EXPECT_THROW(fit_for_day(hist, 24, enet_config(3, 1, 25), 0), ValidationError);
}

TEST(Backtest, ProbeSeesNoLookahead) {
  const auto s = toy_series(90);
  for (int h : {1, 3, 7}) {
    for (int every : {1, 4}) {
      auto cfg = enet_config(3, h, 30);
      cfg.retrain_every = every;
      RecordingProbe probe;
      const auto r = run_backtest(cfg, s, {.probe = &probe});
      ASSERT_EQ(probe.calls.size(), r.rows.size());
      for (auto [t, seen] : probe.calls) EXPECT_EQ(seen, t - static_cast<std::size_t>(h));
    }
  }
}

TEST(Backtest, DefaultSpanAndCoverage) {
  const auto s = toy_series(60);
  const auto cfg = enet_config(3, 2, 25);
  const auto r = run_backtest(cfg, s);
  ASSERT_EQ(r.rows.size(), 60u - 26u);
  EXPECT_EQ(r.rows.front().date, s.days[26]);
  EXPECT_EQ(r.rows.back().date, s.days.back());
  for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_EQ(r.rows[i].actual, s.y[26 + i]);

  auto early = cfg;
  early.eval_start = s.days[20];
  try {
    run_backtest(early, s);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(s.days.front().plus_days(-6).iso()), std::string::npos);
  }
  auto late = cfg;
  late.eval_start = s.days[40];
  late.eval_end = s.days.back().plus_days(2);
  EXPECT_THROW(run_backtest(late, s), ValidationError);
}

TEST(Backtest, LongerTrainingKeepsPredictedDays) {
  const auto s = toy_series(150);
  std::vector<Date> reference;
  for (int l : {25, 50, 100}) {
    auto cfg = enet_config(3, 1, l);
    cfg.eval_start = s.days[110];
    const auto r = run_backtest(cfg, s);
    std::vector<Date> days;
    for (const auto& row : r.rows) days.push_back(row.date);
    if (reference.empty()) reference = days;
    EXPECT_EQ(days, reference);
  }
}

TEST(Backtest, ShuffleAndJobsInvariance) {
  const auto s = toy_series(70);
  for (RegressorKind kind : {RegressorKind::Enet, RegressorKind::Rf}) {
    auto cfg = enet_config(3, 2, 25);
    cfg.regressor.kind = kind;
    cfg.regressor.n_trees = 10;
    cfg.seed = 5;
    const auto base = run_backtest(cfg, s);
    const auto shuffled = run_backtest(cfg, s, {.shuffle_seed = 17});
    const auto threaded = run_backtest(cfg, s, {.jobs = 4, .shuffle_seed = 3});
    ASSERT_EQ(base.rows.size(), shuffled.rows.size());
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
      EXPECT_EQ(base.rows[i].predicted, shuffled.rows[i].predicted);
      EXPECT_EQ(base.rows[i].predicted, threaded.rows[i].predicted);
    }
    EXPECT_EQ(base.rmse, threaded.rmse);
  }
}

TEST(Backtest, RetrainCadenceReusesFits) {
  const auto s = toy_series(70);
  auto daily = enet_config(3, 1, 25);
  auto weekly = daily;
  weekly.retrain_every = 7;
  const auto a = run_backtest(daily, s);
  const auto b = run_backtest(weekly, s);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  // Anchors of each group are fitted identically.
  for (std::size_t i = 0; i < a.rows.size(); i += 7) EXPECT_EQ(a.rows[i].predicted, b.rows[i].predicted);
}

TEST(Backtest, LogReturnTargetRebuildsLevels) {
  const auto s = toy_series(60);
  auto cfg = enet_config(3, 1, 25);
  cfg.target = Target::LogReturn;
  const auto r = run_backtest(cfg, s);
  for (const auto& row : r.rows) {
    EXPECT_GT(row.predicted, 0.0);
    EXPECT_LT(std::abs(std::log(row.predicted / row.actual)), 0.5);
  }
  EXPECT_EQ(parse_target("log-return"), Target::LogReturn);
  EXPECT_THROW(parse_target("returns"), ValidationError);
}

TEST(Backtest, PersistencePredictsLaggedPrice) {
  const auto s = toy_series(40);
  const auto r = persistence_backtest(enet_config(3, 4, 20), s);
  EXPECT_EQ(r.model_label, "persistence");
  for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_EQ(r.rows[i].predicted, s.y[23 + i - 4]);
}

TEST(Backtest, ConfigValidation) {
  EXPECT_THROW(enet_config(3, 0, 25).validate(), ValidationError);
  EXPECT_THROW(enet_config(0, 1, 25).validate(), ValidationError);
  EXPECT_THROW(enet_config(3, 1, 4).validate(), ValidationError);
  EXPECT_NO_THROW(enet_config(3, 1, 5).validate());
  auto c = enet_config(3, 1, 25);
  c.d2 = -1;
  EXPECT_THROW(c.validate(), ValidationError);
  c = enet_config(3, 1, 25);
  c.eval_start = Date::parse("2018-02-01");
  c.eval_end = Date::parse("2018-01-01");
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Backtest, PcaDimensionIsCapped) {
  const auto s = toy_series(60);
  auto cfg = enet_config(3, 1, 25);
  cfg.d2 = 50;
  HistoryAccess hist(s);
  EXPECT_EQ(fit_for_day(hist, 30, cfg, 0).pca.dimension(), 9);
  cfg.d2 = 4;
  EXPECT_EQ(fit_for_day(hist, 30, cfg, 0).pca.dimension(), 4);
}

TEST(Metrics, Identities) {
  const std::vector<double> y{1.0, -2.5, 3.25, 8.0};
  EXPECT_EQ(rmse(y, y), 0.0);
  for (double c : {0.5, -3.0, 1e-3}) {
    std::vector<double> shifted = y;
    for (auto& v : shifted) v += c;
    EXPECT_NEAR(rmse(shifted, y), std::abs(c), 1e-12);
  }
  EXPECT_EQ(gain(2.5, 2.5), 0.0);
  EXPECT_DOUBLE_EQ(gain(1.0, 4.0), 75.0);
  EXPECT_THROW(gain(1.0, 0.0), ValidationError);
  EXPECT_THROW(rmse(std::vector<double>{1.0}, y), ValidationError);
}
