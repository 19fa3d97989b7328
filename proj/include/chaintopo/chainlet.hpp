#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chaintopo/date.hpp"
#include "chaintopo/ingest.hpp"

namespace chaintopo {

inline constexpr int kDefaultDimension = 20;

// 1-chainlet cell C(inputs -> outputs); both 1-based and clamped to the matrix dimension.
struct ChainletKey {
  int inputs = 1;
  int outputs = 1;

  auto operator<=>(const ChainletKey&) const = default;
};

ChainletKey classify(const TransactionRecord& tx, int dim);

// One window's occurrence (O) and amount (A) matrices, row-major, dim x dim.
// Cell (i, o) with 1-based i, o lives at index (i-1)*dim + (o-1).
class WindowSnapshot {
 public:
  WindowSnapshot(Date day, int dim);

  Date day() const { return day_; }
  int dim() const { return dim_; }

  std::size_t cell(ChainletKey key) const;
  ChainletKey key(std::size_t cell) const;

  std::uint64_t occurrence(int i, int o) const { return occurrence_[cell({i, o})]; }
  std::int64_t amount(int i, int o) const { return amount_[cell({i, o})]; }

  std::span<const std::uint64_t> occurrences() const { return occurrence_; }
  std::span<const std::int64_t> amounts() const { return amount_; }
  // Individual transaction amounts of a cell, ascending.
  std::span<const std::int64_t> cell_amounts(std::size_t cell) const { return per_cell_[cell]; }

  std::uint64_t total_transactions() const { return total_; }
  std::vector<std::size_t> active_cells() const;

  void add(const TransactionRecord& tx);

  bool operator==(const WindowSnapshot&) const = default;

 private:
  Date day_;
  int dim_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> occurrence_;
  std::vector<std::int64_t> amount_;
  std::vector<std::vector<std::int64_t>> per_cell_;
};

// All transactions must share `day`; an empty list yields all-zero matrices.
WindowSnapshot build_snapshot(Date day, std::span<const TransactionRecord> txs, int dim);
// Day taken from the transactions; throws on mixed days or an empty list.
WindowSnapshot build_snapshot(std::span<const TransactionRecord> txs, int dim);

// {"day": ..., "dim": N, "cells": [[i, o, count, amount_satoshi], ...]}, active cells only.
std::string snapshot_to_json(const WindowSnapshot& snap);

}  // namespace chaintopo
