#include "chaintopo/tda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaintopo/error.hpp"
#include "chaintopo/union_find.hpp"

namespace chaintopo {

double log_amount(std::int64_t satoshi) {
  if (satoshi < 0) throw ValidationError("amount must be non-negative");
  return std::log1p(static_cast<double>(satoshi) / static_cast<double>(kSatoshiPerBtc));
}

QuantileVector quantiles(std::span<const double> sample, int q) {
  if (sample.empty()) throw ValidationError("quantiles of an empty sample");
  if (q < 1) throw ValidationError("q must be >= 1");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  QuantileVector out;
  out.values.resize(static_cast<std::size_t>(q) + 1);
  for (int k = 0; k <= q; ++k) {
    // h = (n - 1) * k / q; interpolate between order statistics floor(h) and floor(h) + 1.
    const double h = static_cast<double>(n - 1) * k / q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    double v = sorted[lo];
    if (lo + 1 < n && frac > 0.0) v += frac * (sorted[lo + 1] - sorted[lo]);
    out.values[static_cast<std::size_t>(k)] = v;
  }
  out.values.front() = sorted.front();
  out.values.back() = sorted.back();
  return out;
}

double quantile_distance(const QuantileVector& a, const QuantileVector& b) {
  if (a.values.size() != b.values.size()) {
    throw ValidationError("quantile vectors differ in length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double diff = a.values[k] - b.values[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

DistanceMatrix::DistanceMatrix(std::vector<ChainletKey> nodes, std::vector<double> row_major)
    : nodes_(std::move(nodes)), d_(std::move(row_major)) {
  if (d_.size() != nodes_.size() * nodes_.size()) {
    throw ValidationError("distance matrix size does not match node count");
  }
}

DistanceMatrix distance_matrix(const WindowSnapshot& snap, const DistanceOptions& opts) {
  if (opts.q < 1) throw ValidationError("q must be >= 1");
  std::vector<std::size_t> cells;
  if (opts.impute_inactive) {
    cells.resize(snap.occurrences().size());
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = c;
  } else {
    cells = snap.active_cells();
  }
  if (cells.empty()) {
    throw ValidationError("no active chainlets in window " + snap.day().iso());
  }

  std::vector<ChainletKey> nodes;
  std::vector<QuantileVector> qv;
  nodes.reserve(cells.size());
  qv.reserve(cells.size());
  std::vector<double> logs;
  for (std::size_t c : cells) {
    const auto amounts = snap.cell_amounts(c);
    logs.clear();
    for (std::int64_t a : amounts) logs.push_back(log_amount(a));
    if (logs.empty()) logs.push_back(0.0);
    nodes.push_back(snap.key(c));
    qv.push_back(quantiles(logs, opts.q));
  }

  const std::size_t n = nodes.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = quantile_distance(qv[i], qv[j]);
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return DistanceMatrix(std::move(nodes), std::move(d));
}

BettiCurves betti_curves(const DistanceMatrix& dm, std::span<const double> scales) {
  for (std::size_t k = 1; k < scales.size(); ++k) {
    if (!(scales[k] > scales[k - 1])) throw ValidationError("scales must be strictly increasing");
  }
  struct Edge {
    double d;
    std::size_t a, b;
  };
  const std::size_t n = dm.size();
  std::vector<Edge> edges;
  edges.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({dm(i, j), i, j});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  BettiCurves out;
  out.scales.assign(scales.begin(), scales.end());
  out.beta0.reserve(scales.size());
  out.beta1.reserve(scales.size());
  UnionFind uf(n);
  std::size_t next = 0;
  for (double eps : scales) {
    while (next < edges.size() && edges[next].d <= eps) {
      uf.unite(edges[next].a, edges[next].b);
      ++next;
    }
    const auto components = static_cast<std::int64_t>(uf.components());
    out.beta0.push_back(components);
    out.beta1.push_back(static_cast<std::int64_t>(next) - static_cast<std::int64_t>(n) + components);
  }
  return out;
}

std::vector<std::int64_t> betti_derivative(std::span<const std::int64_t> curve, int order) {
  if (order < 0) throw ValidationError("derivative order must be >= 0");
  if (curve.size() <= static_cast<std::size_t>(order)) {
    throw ValidationError("curve of length " + std::to_string(curve.size()) +
                          " is too short for a derivative of order " + std::to_string(order));
  }
  std::vector<std::int64_t> out(curve.begin(), curve.end());
  for (int l = 0; l < order; ++l) {
    for (std::size_t k = 0; k + 1 < out.size(); ++k) out[k] = out[k + 1] - out[k];
    out.pop_back();
  }
  return out;
}

std::vector<double> build_scale_grid(std::span<const DistanceMatrix> windows, int s) {
  if (s < 2) throw ValidationError("scale grid needs s >= 2");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool any = false;
  for (const auto& dm : windows) {
    if (dm.size() == 0) continue;
    any = true;
    for (std::size_t i = 0; i < dm.size(); ++i) {
      for (std::size_t j = i + 1; j < dm.size(); ++j) {
        const double v = dm(i, j);
        if (v > 0.0) lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!any) throw ValidationError("scale grid needs at least one nonempty distance matrix");
  if (hi <= 0.0) throw ValidationError("scale grid is degenerate: every distance is zero");
  // A single distinct positive distance leaves no range; start the grid at zero instead.
  if (lo >= hi) lo = 0.0;

  std::vector<double> grid(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (s - 1);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace chaintopo
