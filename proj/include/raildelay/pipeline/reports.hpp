#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "raildelay/core/delay_kind.hpp"
#include "raildelay/core/record.hpp"
#include "raildelay/metrics/summary.hpp"

namespace raildelay::pipeline {

struct ReliabilityRow {
  DelayKind kind;
  Mode mode;
  metrics::CriticalCount critical;
};

/// Critical-delay counts per kind and dataset. Kinds absent from a dataset
/// are skipped.
std::vector<ReliabilityRow> reliability_report(std::span<const Dataset> datasets);
/// Delay,Measurement Mode,Count,Percentage
std::string reliability_csv(std::span<const ReliabilityRow> rows);

struct StatsRow {
  DelayKind kind;
  Mode mode;
  std::string region;  // empty outside the regional report
  std::size_t samples = 0;
  metrics::SummaryStats stats;
};

/// East/West statistics per kind and dataset.
std::vector<StatsRow> regional_report(std::span<const Dataset> datasets, double boundary_lon);
std::vector<StatsRow> summary_report(std::span<const Dataset> datasets);

/// Delay,Measurement Mode[,Region],Mean,Min,25%,50%,75%,Max
std::string stats_csv(std::span<const StatsRow> rows, bool with_region);

/// Point features with [lon, lat] coordinates for every record carrying `kind`.
nlohmann::json export_geojson(const Dataset& dataset, DelayKind kind);

/// Quintile bucket 0..4 of a non-critical delay among `sorted` (the ascending
/// non-critical delays of the same kind); nullopt for critical delays.
std::optional<int> delay_bucket(double delay_ms, double threshold_ms, std::span<const double> sorted);

} // namespace raildelay::pipeline
