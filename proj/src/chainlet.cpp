#include "chaintopo/chainlet.hpp"

#include <algorithm>

#include <json.hpp>

#include "chaintopo/error.hpp"

namespace chaintopo {

ChainletKey classify(const TransactionRecord& tx, int dim) {
  if (dim < 1) throw ValidationError("matrix dimension must be >= 1");
  return {static_cast<int>(std::min<std::int64_t>(tx.input_count, dim)),
          static_cast<int>(std::min<std::int64_t>(tx.output_count, dim))};
}

WindowSnapshot::WindowSnapshot(Date day, int dim) : day_(day), dim_(dim) {
  if (dim < 1) throw ValidationError("matrix dimension must be >= 1");
  const auto cells = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  occurrence_.assign(cells, 0);
  amount_.assign(cells, 0);
  per_cell_.resize(cells);
}

std::size_t WindowSnapshot::cell(ChainletKey key) const {
  return static_cast<std::size_t>(key.inputs - 1) * static_cast<std::size_t>(dim_) +
         static_cast<std::size_t>(key.outputs - 1);
}

ChainletKey WindowSnapshot::key(std::size_t cell) const {
  const auto n = static_cast<std::size_t>(dim_);
  return {static_cast<int>(cell / n) + 1, static_cast<int>(cell % n) + 1};
}

std::vector<std::size_t> WindowSnapshot::active_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < occurrence_.size(); ++c) {
    if (occurrence_[c] > 0) out.push_back(c);
  }
  return out;
}

void WindowSnapshot::add(const TransactionRecord& tx) {
  if (tx.day != day_) {
    throw ValidationError("transaction " + tx.tx_id + " is dated " + tx.day.iso() +
                          ", window is " + day_.iso());
  }
  const std::size_t c = cell(classify(tx, dim_));
  occurrence_[c] += 1;
  amount_[c] += tx.amount;
  auto& bucket = per_cell_[c];
  bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), tx.amount), tx.amount);
  ++total_;
}

WindowSnapshot build_snapshot(Date day, std::span<const TransactionRecord> txs, int dim) {
  WindowSnapshot snap(day, dim);
  for (const auto& tx : txs) snap.add(tx);
  return snap;
}

WindowSnapshot build_snapshot(std::span<const TransactionRecord> txs, int dim) {
  if (txs.empty()) throw ValidationError("cannot infer the window day from an empty list");
  return build_snapshot(txs.front().day, txs, dim);
}

std::string snapshot_to_json(const WindowSnapshot& snap) {
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (std::size_t c : snap.active_cells()) {
    const ChainletKey k = snap.key(c);
    cells.push_back({k.inputs, k.outputs, snap.occurrences()[c], snap.amounts()[c]});
  }
  nlohmann::ordered_json j;
  j["day"] = snap.day().iso();
  j["dim"] = snap.dim();
  j["cells"] = std::move(cells);
  return j.dump();
}

}  // namespace chaintopo
