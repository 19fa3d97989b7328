#include <algorithm>
#include <cmath>
#include <cstdio>

#include "chaintopo/error.hpp"
#include "chaintopo/ingest.hpp"
#include "chaintopo/rng.hpp"

namespace chaintopo {
namespace {

// Address counts: mostly small, geometric tail, occasional very wide
// transactions so the matrix clamping is exercised.
std::int64_t draw_arity(Rng& rng, double continue_p) {
  if (rng.uniform() < 0.02) return rng.between(21, 60);
  std::int64_t k = 1;
  while (k < 40 && rng.uniform() < continue_p) ++k;
  return k;
}

std::string tx_id(Date day, std::size_t k) {
  std::string iso = day.iso();
  iso.erase(std::remove(iso.begin(), iso.end(), '-'), iso.end());
  char buf[32];
  std::snprintf(buf, sizeof buf, "-%06zu", k);
  return iso + buf;
}

}  // namespace

DailySeries generate_synthetic(const SyntheticParams& params) {
  if (params.n_days < 1) throw ValidationError("n_days must be >= 1");
  if (params.txs_per_day < 1) throw ValidationError("txs_per_day must be >= 1");

  const std::int64_t m = params.txs_per_day;
  const std::int64_t lo = std::max<std::int64_t>(1, (m + 1) / 2);
  const std::int64_t hi = std::max(lo, m + m / 2);

  Rng global(derive_seed(params.seed, 0x5eed));
  std::int64_t cycle[3];
  for (auto& c : cycle) c = global.between(lo, hi);

  DailySeries series;
  const auto n = static_cast<std::size_t>(params.n_days);
  series.days.reserve(n);
  series.transactions.resize(n);
  series.prices.reserve(n);

  double regime = 0.0;
  double walk_price = 1000.0;
  for (std::size_t t = 0; t < n; ++t) {
    const Date day = params.start.plus_days(static_cast<long long>(t));
    Rng rng(derive_seed(params.seed, 1, t));

    regime = std::clamp(regime + 0.15 * global.normal(), -1.5, 1.5);
    const std::int64_t count =
        params.price_model == PriceModel::FeatureLinked ? cycle[t % 3] : rng.between(lo, hi);

    auto& txs = series.transactions[t];
    txs.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
      TransactionRecord tx;
      tx.day = day;
      tx.tx_id = tx_id(day, static_cast<std::size_t>(k));
      tx.input_count = draw_arity(rng, 0.45);
      tx.output_count = draw_arity(rng, 0.55);
      // log10 of the BTC amount depends on the chainlet shape and the day's regime.
      const double shape = 0.12 * static_cast<double>(std::min<std::int64_t>(tx.input_count, 20)) -
                           0.05 * static_cast<double>(std::min<std::int64_t>(tx.output_count, 20));
      const double log10_btc = -0.5 + shape + 0.6 * regime + 0.8 * rng.normal();
      const double btc = std::min(std::pow(10.0, log10_btc), 1e6);
      tx.amount = std::llround(btc * static_cast<double>(kSatoshiPerBtc));
      txs.push_back(std::move(tx));
    }

    double price = 0.0;
    switch (params.price_model) {
      case PriceModel::Linear:
        price = 1000.0 + 10.0 * static_cast<double>(t);
        break;
      case PriceModel::RandomWalk:
        if (t > 0) walk_price *= std::exp(0.03 * rng.normal());
        price = std::round(walk_price * 100.0) / 100.0;
        break;
      case PriceModel::FeatureLinked:
        price = kLinkedIntercept + kLinkedSlope * static_cast<double>(count);
        break;
    }
    series.days.push_back(day);
    series.prices.push_back(PricePoint{day, price});
  }
  return series;
}

}  // namespace chaintopo
