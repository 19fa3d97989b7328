#include "chaintopo/ingest.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

#include "chaintopo/error.hpp"
#include "chaintopo/format.hpp"

namespace chaintopo {
namespace {

// Calls row(fields, line_no) for each non-blank data row after checking the header.
template <typename RowFn>
void read_csv(std::istream& in, std::string_view header, std::size_t n_fields, RowFn&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!seen_header) {
      if (line != header) {
        throw ParseError(line_no, "expected header '" + std::string(header) + "', got '" + line + "'");
      }
      seen_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != n_fields) {
      throw ParseError(line_no, "expected " + std::to_string(n_fields) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    row(fields, line_no);
  }
  if (!seen_header) throw ParseError(1, "missing header '" + std::string(header) + "'");
}

Date parse_date_field(std::string_view text, std::size_t line_no) {
  try {
    return Date::parse(text);
  } catch (const ValidationError& e) {
    throw ParseError(line_no, e.what());
  }
}

}  // namespace

std::vector<TransactionRecord> DailySeries::flat_transactions() const {
  std::vector<TransactionRecord> out;
  for (const auto& day : transactions) out.insert(out.end(), day.begin(), day.end());
  return out;
}

std::vector<TransactionRecord> parse_transactions(std::istream& in) {
  std::vector<TransactionRecord> out;
  read_csv(in, kTransactionsHeader, 5, [&](const std::vector<std::string_view>& f, std::size_t ln) {
    TransactionRecord tx;
    tx.day = parse_date_field(f[0], ln);
    if (f[1].empty()) throw ParseError(ln, "empty tx_id");
    tx.tx_id = std::string(f[1]);
    if (!parse_int64(f[2], tx.input_count)) throw ParseError(ln, "bad input_count '" + std::string(f[2]) + "'");
    if (!parse_int64(f[3], tx.output_count)) throw ParseError(ln, "bad output_count '" + std::string(f[3]) + "'");
    if (!parse_int64(f[4], tx.amount)) throw ParseError(ln, "bad amount_satoshi '" + std::string(f[4]) + "'");
    if (tx.input_count < 1 || tx.output_count < 1) {
      throw ValidationError("line " + std::to_string(ln) + ": input_count and output_count must be >= 1");
    }
    if (tx.amount < 0) {
      throw ValidationError("line " + std::to_string(ln) + ": amount_satoshi must be >= 0");
    }
    out.push_back(std::move(tx));
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const TransactionRecord& a, const TransactionRecord& b) { return a.day < b.day; });
  return out;
}

std::vector<TransactionRecord> parse_transactions(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_transactions(in);
}

std::vector<PricePoint> parse_prices(std::istream& in) {
  std::vector<PricePoint> out;
  read_csv(in, kPricesHeader, 2, [&](const std::vector<std::string_view>& f, std::size_t ln) {
    PricePoint p;
    p.day = parse_date_field(f[0], ln);
    if (!parse_double(f[1], p.price)) throw ParseError(ln, "bad price_usd '" + std::string(f[1]) + "'");
    if (p.price < 0.0) throw ValidationError("line " + std::to_string(ln) + ": negative price");
    out.push_back(p);
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const PricePoint& a, const PricePoint& b) { return a.day < b.day; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].day == out[i - 1].day) {
      throw ValidationError("duplicate price for " + out[i].day.iso());
    }
  }
  return out;
}

std::vector<PricePoint> parse_prices(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_prices(in);
}

std::string serialize_transactions(const std::vector<TransactionRecord>& txs) {
  std::string out(kTransactionsHeader);
  out += '\n';
  for (const auto& tx : txs) {
    out += tx.day.iso();
    out += ',';
    out += tx.tx_id;
    out += ',';
    out += std::to_string(tx.input_count);
    out += ',';
    out += std::to_string(tx.output_count);
    out += ',';
    out += std::to_string(tx.amount);
    out += '\n';
  }
  return out;
}

std::string serialize_prices(const std::vector<PricePoint>& prices) {
  std::string out(kPricesHeader);
  out += '\n';
  for (const auto& p : prices) {
    out += p.day.iso();
    out += ',';
    out += format_double(p.price);
    out += '\n';
  }
  return out;
}

DailySeries assemble_series(std::vector<TransactionRecord> txs, std::vector<PricePoint> prices) {
  DailySeries series;
  if (txs.empty() && prices.empty()) return series;

  std::map<Date, PricePoint> by_day;
  for (const auto& p : prices) {
    if (!by_day.emplace(p.day, p).second) {
      throw ValidationError("duplicate price for " + p.day.iso());
    }
  }
  std::stable_sort(txs.begin(), txs.end(),
                   [](const TransactionRecord& a, const TransactionRecord& b) { return a.day < b.day; });

  Date first = !by_day.empty() ? by_day.begin()->first : txs.front().day;
  Date last = !by_day.empty() ? by_day.rbegin()->first : txs.back().day;
  if (!txs.empty()) {
    first = std::min(first, txs.front().day);
    last = std::max(last, txs.back().day);
  }

  const auto n = static_cast<std::size_t>(first.days_until(last) + 1);
  series.days.reserve(n);
  series.transactions.resize(n);
  series.prices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Date d = first.plus_days(static_cast<long long>(i));
    auto it = by_day.find(d);
    if (it == by_day.end()) throw ValidationError("missing price for " + d.iso());
    series.days.push_back(d);
    series.prices.push_back(it->second);
  }
  for (auto& tx : txs) {
    const auto idx = static_cast<std::size_t>(first.days_until(tx.day));
    series.transactions[idx].push_back(std::move(tx));
  }
  return series;
}

PriceModel parse_price_model(std::string_view name) {
  if (name == "linear") return PriceModel::Linear;
  if (name == "random-walk") return PriceModel::RandomWalk;
  if (name == "feature-linked") return PriceModel::FeatureLinked;
  throw ValidationError("unknown price model '" + std::string(name) + "'");
}

std::string_view to_string(PriceModel m) {
  switch (m) {
    case PriceModel::Linear: return "linear";
    case PriceModel::RandomWalk: return "random-walk";
    case PriceModel::FeatureLinked: return "feature-linked";
  }
  return "?";
}

}  // namespace chaintopo
