#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "chaintopo/date.hpp"

namespace chaintopo {

inline constexpr std::int64_t kSatoshiPerBtc = 100'000'000;

struct TransactionRecord {
  Date day;
  std::string tx_id;
  std::int64_t input_count = 1;
  std::int64_t output_count = 1;
  // Sum of input amounts, satoshi.
  std::int64_t amount = 0;

  bool operator==(const TransactionRecord&) const = default;
};

struct PricePoint {
  Date day;
  double price = 0.0;  // USD

  bool operator==(const PricePoint&) const = default;
};

// Contiguous run of days; `transactions[i]` and `prices[i]` belong to `days[i]`.
struct DailySeries {
  std::vector<Date> days;
  std::vector<std::vector<TransactionRecord>> transactions;
  std::vector<PricePoint> prices;

  std::size_t size() const { return days.size(); }
  std::vector<TransactionRecord> flat_transactions() const;
};

inline constexpr std::string_view kTransactionsHeader =
    "date,tx_id,input_count,output_count,amount_satoshi";
inline constexpr std::string_view kPricesHeader = "date,price_usd";

// Records are returned stably sorted by date. Throws ParseError (with line
// number) on malformed rows and ValidationError on out-of-range counts.
std::vector<TransactionRecord> parse_transactions(std::istream& in);
std::vector<TransactionRecord> parse_transactions(std::string_view text);

// Sorted by date; duplicate dates and negative prices are ValidationErrors.
std::vector<PricePoint> parse_prices(std::istream& in);
std::vector<PricePoint> parse_prices(std::string_view text);

// Canonical CSV (header + one row per record, `\n` line endings).
std::string serialize_transactions(const std::vector<TransactionRecord>& txs);
std::string serialize_prices(const std::vector<PricePoint>& prices);

// Days span the earliest to the latest date seen in either input. Every day in
// that range must have a price; the first day without one is named in the error.
DailySeries assemble_series(std::vector<TransactionRecord> txs, std::vector<PricePoint> prices);

enum class PriceModel { Linear, RandomWalk, FeatureLinked };

PriceModel parse_price_model(std::string_view name);
std::string_view to_string(PriceModel m);

struct SyntheticParams {
  int n_days = 365;
  int txs_per_day = 200;
  PriceModel price_model = PriceModel::Linear;
  std::uint64_t seed = 0;
  Date start = Date::from_ymd(2017, 1, 1);
};

// Pure function of its arguments. In FeatureLinked mode the daily transaction
// count cycles with period 3 and price_t = kLinkedIntercept + kLinkedSlope * count_t.
DailySeries generate_synthetic(const SyntheticParams& params);

inline constexpr double kLinkedIntercept = 250.0;
inline constexpr double kLinkedSlope = 4.0;

}  // namespace chaintopo
