#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace raildelay::metrics {

struct SummaryStats {
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

/// Quantile of ascending-sorted data by linear interpolation at rank p*(n-1).
double quantile_sorted(std::span<const double> sorted, double p);

SummaryStats summary(std::span<const double> values);

struct CriticalCount {
  std::size_t count = 0;
  std::size_t total = 0;
  double percentage = 0.0;  // 100 * count / total
};

/// Samples strictly above `threshold_ms`.
CriticalCount critical_count(std::span<const double> values, double threshold_ms);

/// Percentage with three decimals and a trailing '%', e.g. "0.004%".
std::string format_percentage(double percentage);

} // namespace raildelay::metrics
