#pragma once

// Spearman rank correlation and the WER-threshold correlation report.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "shallow/aggregate.hpp"

namespace shallow {

// 1-based ranks; tied values share the mean of the positions they occupy.
inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Empty when either side has zero variance.
inline std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n == 0) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Undefined (empty) for fewer than three samples or constant input.
inline std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 3) return std::nullopt;
  return pearson(average_ranks(x), average_ranks(y));
}

enum class BinMode { kCumulative, kDisjoint };

using CorrelationMatrix = std::array<std::array<std::optional<double>, 5>, 5>;

struct CorrelationBin {
  double threshold = 0.0;                // percent, inclusive upper bound
  std::optional<double> lower;           // percent, exclusive lower bound (disjoint bins)
  std::size_t count = 0;
  bool defined = false;                  // false when fewer than 3 samples
  CorrelationMatrix rho;
};

struct CorrelationReport {
  BinMode mode = BinMode::kCumulative;
  std::vector<CorrelationBin> bins;
};

inline std::vector<double> default_thresholds() { return {10, 20, 30, 40, 50, 60, 70, 80, 90}; }

inline CorrelationMatrix correlation_matrix(const std::vector<const ScoreRecord*>& rows) {
  CorrelationMatrix m{};
  if (rows.size() < 3) return m;
  for (std::size_t a = 0; a < 5; ++a) {
    m[a][a] = 1.0;
    for (std::size_t b = a + 1; b < 5; ++b) {
      std::vector<double> x, y;
      for (const ScoreRecord* r : rows) {
        const auto va = metric_value(*r, kAllMetrics[a]);
        const auto vb = metric_value(*r, kAllMetrics[b]);
        if (va && vb) {
          x.push_back(*va);
          y.push_back(*vb);
        }
      }
      m[a][b] = m[b][a] = spearman(x, y);
    }
  }
  return m;
}

// Records with WER <= t/100 for each threshold t (cumulative), or with WER in
// (previous t, t] (disjoint; the first bin starts at 0 inclusive).
inline CorrelationReport correlation_by_threshold(const std::vector<ScoreRecord>& records,
                                                  std::vector<double> thresholds = default_thresholds(),
                                                  BinMode mode = BinMode::kCumulative) {
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  CorrelationReport report{mode, {}};
  std::optional<double> prev;
  for (double t : thresholds) {
    CorrelationBin bin;
    bin.threshold = t;
    if (mode == BinMode::kDisjoint) bin.lower = prev;
    std::vector<const ScoreRecord*> rows;
    for (const ScoreRecord& r : records) {
      if (r.wer > t / 100.0) continue;
      if (mode == BinMode::kDisjoint && prev && r.wer <= *prev / 100.0) continue;
      rows.push_back(&r);
    }
    bin.count = rows.size();
    bin.defined = rows.size() >= 3;
    bin.rho = correlation_matrix(rows);
    report.bins.push_back(std::move(bin));
    prev = t;
  }
  return report;
}

inline std::optional<double> rho(const CorrelationBin& bin, Metric a, Metric b) {
  return bin.rho[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

}  // namespace shallow
