#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "raildelay/core/error.hpp"

namespace raildelay::metrics {

namespace detail {

template <typename A, typename P>
void check_pair(const Eigen::MatrixBase<A>& actual, const Eigen::MatrixBase<P>& predicted) {
  if (actual.size() != predicted.size()) throw InputError("metric inputs differ in length");
  if (actual.size() == 0) throw InputError("metric inputs are empty");
}

} // namespace detail

template <typename A, typename P>
double rmse(const Eigen::MatrixBase<A>& actual, const Eigen::MatrixBase<P>& predicted) {
  detail::check_pair(actual, predicted);
  return std::sqrt((actual - predicted).squaredNorm() / static_cast<double>(actual.size()));
}

template <typename A, typename P>
double mae(const Eigen::MatrixBase<A>& actual, const Eigen::MatrixBase<P>& predicted) {
  detail::check_pair(actual, predicted);
  return (actual - predicted).cwiseAbs().sum() / static_cast<double>(actual.size());
}

/// Coefficient of determination about the mean of `actual`. nullopt when
/// `actual` has zero variance.
template <typename A, typename P>
std::optional<double> r2(const Eigen::MatrixBase<A>& actual, const Eigen::MatrixBase<P>& predicted) {
  detail::check_pair(actual, predicted);
  const double mean = actual.mean();
  const double ss_tot = (actual.array() - mean).square().sum();
  if (!(ss_tot > 0.0)) return std::nullopt;
  return 1.0 - (actual - predicted).squaredNorm() / ss_tot;
}

/// A ratio that is undefined when its denominator is zero.
struct PrecisionRecall {
  std::optional<double> precision;
  std::optional<double> recall;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

/// Positives are values strictly above `threshold_ms`.
template <typename A, typename P>
PrecisionRecall precision_recall(const Eigen::MatrixBase<A>& actual,
                                 const Eigen::MatrixBase<P>& predicted, double threshold_ms) {
  detail::check_pair(actual, predicted);
  PrecisionRecall out;
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    const bool a = actual(i) > threshold_ms;
    const bool p = predicted(i) > threshold_ms;
    out.true_positives += a && p;
    out.false_positives += !a && p;
    out.false_negatives += a && !p;
  }
  const auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  out.precision = ratio(out.true_positives, out.true_positives + out.false_positives);
  out.recall = ratio(out.true_positives, out.true_positives + out.false_negatives);
  return out;
}

struct MetricsReport {
  double rmse = 0.0;
  std::optional<double> r2;
  double mae = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  double threshold_ms = 0.0;
};

template <typename A, typename P>
MetricsReport evaluate(const Eigen::MatrixBase<A>& actual, const Eigen::MatrixBase<P>& predicted,
                       double threshold_ms) {
  MetricsReport m;
  m.rmse = rmse(actual, predicted);
  m.r2 = r2(actual, predicted);
  m.mae = mae(actual, predicted);
  const auto pr = precision_recall(actual, predicted, threshold_ms);
  m.precision = pr.precision;
  m.recall = pr.recall;
  m.threshold_ms = threshold_ms;
  return m;
}

} // namespace raildelay::metrics
