#include "raildelay/metrics/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "raildelay/core/error.hpp"

namespace raildelay::metrics {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  const double rank = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double w = rank - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

SummaryStats summary(std::span<const double> values) {
  if (values.empty()) throw InputError("summary of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::ranges::sort(sorted);
  SummaryStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.q25 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q75 = quantile_sorted(sorted, 0.75);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  // Rounding can push the mean of near-constant data a hair outside [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

CriticalCount critical_count(std::span<const double> values, double threshold_ms) {
  if (values.empty()) throw InputError("critical count of an empty sample");
  CriticalCount c;
  c.total = values.size();
  c.count = static_cast<std::size_t>(
      std::ranges::count_if(values, [&](double v) { return v > threshold_ms; }));
  c.percentage = 100.0 * static_cast<double>(c.count) / static_cast<double>(c.total);
  return c;
}

std::string format_percentage(double percentage) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f%%", percentage);
  return buf;
}

} // namespace raildelay::metrics
