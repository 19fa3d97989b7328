#include "chaintopo/pipeline.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "chaintopo/error.hpp"
#include "chaintopo/format.hpp"
#include "chaintopo/log.hpp"

namespace chaintopo {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < std::min(workers, n); ++k) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void FeatureConfig::validate() const {
  if (dim < 1) throw ValidationError("matrix dimension N must be >= 1");
  if (q < 1) throw ValidationError("q must be >= 1");
  if (s < 2) throw ValidationError("S must be >= 2");
  if (order < 1 || order >= s) throw ValidationError("derivative order must be in [1, S)");
  if (grid_start && grid_end && *grid_end < *grid_start) {
    throw ValidationError("grid span ends before it starts");
  }
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
}

FeaturePipeline::FeaturePipeline(const DailySeries& series, FeatureConfig cfg)
    : series_(&series), cfg_(std::move(cfg)) {
  cfg_.validate();
  const std::size_t n = series.size();
  snapshots_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    snapshots_.push_back(build_snapshot(series.days[i], series.transactions[i], cfg_.dim));
    if (series.transactions[i].empty()) {
      log::warn("no transactions on " + series.days[i].iso() + "; its features are zero");
    }
  }
}

const std::vector<double>& FeaturePipeline::scale_grid() {
  if (!grid_.empty()) return grid_;
  const std::size_t n = snapshots_.size();
  distances_.assign(n, std::nullopt);
  DistanceOptions dopts{cfg_.q, cfg_.impute_inactive};
  parallel_for(n, cfg_.jobs, [&](std::size_t i) {
    if (cfg_.impute_inactive || snapshots_[i].total_transactions() > 0) {
      distances_[i] = distance_matrix(snapshots_[i], dopts);
    }
  });
  std::vector<DistanceMatrix> grid_windows;
  for (std::size_t i = 0; i < n; ++i) {
    const Date d = series_->days[i];
    if (cfg_.grid_start && d < *cfg_.grid_start) continue;
    if (cfg_.grid_end && d > *cfg_.grid_end) continue;
    if (distances_[i]) grid_windows.push_back(*distances_[i]);
  }
  grid_ = build_scale_grid(grid_windows, cfg_.s);
  return grid_;
}

void FeaturePipeline::ensure_curves() {
  if (curves_ready_) return;
  const auto& grid = scale_grid();
  curves_.assign(snapshots_.size(), std::nullopt);
  parallel_for(snapshots_.size(), cfg_.jobs, [&](std::size_t i) {
    if (distances_[i]) curves_[i] = betti_curves(*distances_[i], grid);
  });
  curves_ready_ = true;
}

FeatureSeries FeaturePipeline::build(FeatureKind kind) {
  if (kind == FeatureKind::Betti || kind == FeatureKind::BettiDeriv) ensure_curves();
  const std::size_t n = snapshots_.size();
  std::vector<FeatureVector> rows(n);
  parallel_for(n, cfg_.jobs, [&](std::size_t i) {
    const double price = series_->prices[i].price;
    const auto& snap = snapshots_[i];
    switch (kind) {
      case FeatureKind::Baseline:
        rows[i] = baseline_features(price, snap);
        break;
      case FeatureKind::Fl:
        rows[i] = fl_feature_vector(price, snap, fl_features(snap, cfg_.fl_scales));
        break;
      case FeatureKind::Betti:
      case FeatureKind::BettiDeriv:
        rows[i] = betti_feature_vector(price, snap, curves_[i], grid_.size(),
                                       kind == FeatureKind::BettiDeriv, cfg_.order);
        break;
    }
  });

  FeatureSeries fs;
  fs.kind = kind;
  if (n > 0) {
    fs.names = rows.front().names;
  } else if (kind == FeatureKind::Baseline) {
    fs.names = {"price", "total_tx"};
  }
  fs.days = series_->days;
  fs.x.reserve(n);
  fs.y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    fs.x.push_back(std::move(rows[i].values));
    fs.y.push_back(series_->prices[i].price);
  }
  return fs;
}

std::map<FeatureKind, FeatureSeries> FeaturePipeline::build_all(std::span<const FeatureKind> kinds) {
  std::map<FeatureKind, FeatureSeries> out;
  for (FeatureKind k : kinds) {
    if (!out.contains(k)) out.emplace(k, build(k));
  }
  return out;
}

std::vector<BasicDiagnostics> FeaturePipeline::diagnostics() const {
  std::vector<BasicDiagnostics> out;
  out.reserve(snapshots_.size());
  for (std::size_t i = 0; i < snapshots_.size(); ++i) {
    out.push_back(basic_diagnostics(series_->prices[i].price, snapshots_[i]));
  }
  return out;
}

std::string features_to_csv(const FeatureSeries& fs) {
  std::string out = "date";
  for (const auto& name : fs.names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t i = 0; i < fs.size(); ++i) {
    out += fs.days[i].iso();
    for (double v : fs.x[i]) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string diagnostics_to_csv(const std::vector<BasicDiagnostics>& rows) {
  std::string out =
      "date,price,total_tx,mean_tx_amount,total_tx_amount,mean_degree,num_new_address,clus_coeff\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); };
  for (const auto& r : rows) {
    out += r.day.iso() + ',' + format_double(r.price) + ',' + std::to_string(r.total_tx) + ',' +
           format_double(r.mean_tx_amount_btc) + ',' + format_double(r.total_tx_amount_btc) + ',' +
           opt(r.mean_degree) + ',' + opt(r.num_new_address) + ',' + opt(r.clus_coeff) + '\n';
  }
  return out;
}

}  // namespace chaintopo
