#pragma once

// Brute-force reference implementations. They share no code with the library
// and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;  // row-major, rows x features

inline double sse(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

/// Tries every feature and every midpoint between consecutive distinct values,
/// partitions the rows afresh and recomputes both SSEs. Keeps the first
/// candidate (feature ascending, threshold ascending) unless a later one beats
/// it by more than tol * SSE(node).
inline std::optional<Split> best_split(const Matrix& X, const std::vector<double>& y,
                                       std::size_t min_leaf = 1, double tol = 1e-12) {
  const double parent = sse(y);
  const double slack = tol * parent;
  std::optional<Split> best;
  const std::size_t features = X.empty() ? 0 : X[0].size();
  for (std::size_t f = 0; f < features; ++f) {
    std::vector<double> values;
    for (const auto& row : X) values.push_back(row[f]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      double t = values[k] + (values[k + 1] - values[k]) / 2.0;
      if (!(t < values[k + 1])) t = values[k];
      std::vector<double> left, right;
      for (std::size_t i = 0; i < X.size(); ++i) (X[i][f] <= t ? left : right).push_back(y[i]);
      if (left.size() < min_leaf || right.size() < min_leaf) continue;
      const double gain = parent - sse(left) - sse(right);
      if (!(gain > slack)) continue;
      if (!best || gain > best->gain + slack) best = Split{static_cast<int>(f), t, gain};
    }
  }
  return best;
}

/// SSE of the unbounded greedy tree built by repeatedly applying best_split.
inline double greedy_tree_sse(const Matrix& X, const std::vector<double>& y) {
  const auto split = best_split(X, y);
  if (!split) return sse(y);
  Matrix xl, xr;
  std::vector<double> yl, yr;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i][split->feature] <= split->threshold) {
      xl.push_back(X[i]);
      yl.push_back(y[i]);
    } else {
      xr.push_back(X[i]);
      yr.push_back(y[i]);
    }
  }
  return greedy_tree_sse(xl, yl) + greedy_tree_sse(xr, yr);
}

inline double rmse(const std::vector<double>& a, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - p[i]) * (a[i] - p[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

inline double mae(const std::vector<double>& a, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - p[i]);
  return s / static_cast<double>(a.size());
}

inline std::optional<double> r2(const std::vector<double>& a, const std::vector<double>& p) {
  const double m = mean(a);
  double tot = 0.0, res = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    tot += (a[i] - m) * (a[i] - m);
    res += (a[i] - p[i]) * (a[i] - p[i]);
  }
  if (tot == 0.0) return std::nullopt;
  return 1.0 - res / tot;
}

struct PrecisionRecall {
  std::optional<double> precision, recall;
};

inline PrecisionRecall precision_recall(const std::vector<double>& a, const std::vector<double>& p,
                                        double threshold) {
  int tp = 0, predicted = 0, actual = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (p[i] > threshold) ++predicted;
    if (a[i] > threshold) ++actual;
    if (p[i] > threshold && a[i] > threshold) ++tp;
  }
  PrecisionRecall out;
  if (predicted > 0) out.precision = static_cast<double>(tp) / predicted;
  if (actual > 0) out.recall = static_cast<double>(tp) / actual;
  return out;
}

/// Quantile at rank p*(n-1) with linear interpolation, written as a weighted
/// average of the neighbouring order statistics.
inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double rank = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double w = rank - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

/// Spearman rank correlation (Pearson on average ranks).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double ma = mean(ra), mb = mean(rb);
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

inline bool close_rel(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

} // namespace oracle
