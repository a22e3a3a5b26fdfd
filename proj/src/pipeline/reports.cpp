#include "raildelay/pipeline/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "raildelay/core/error.hpp"
#include "raildelay/core/split.hpp"

namespace raildelay::pipeline {

namespace {

std::string two_decimals(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void require_data(std::span<const Dataset> datasets) {
  if (datasets.empty()) throw InputError("no datasets given");
  for (const auto& d : datasets)
    if (d.empty()) throw InputError(std::string(mode_code(d.mode())) + " dataset is empty");
}

} // namespace

std::vector<ReliabilityRow> reliability_report(std::span<const Dataset> datasets) {
  require_data(datasets);
  std::vector<ReliabilityRow> rows;
  for (const auto kind : kAllDelayKinds) {
    for (const auto& d : datasets) {
      const auto values = d.delays(kind);
      if (values.empty()) continue;
      rows.push_back({kind, d.mode(), metrics::critical_count(values, critical_threshold_ms(kind))});
    }
  }
  return rows;
}

std::string reliability_csv(std::span<const ReliabilityRow> rows) {
  std::ostringstream out;
  out << "Delay,Measurement Mode,Count,Percentage\n";
  for (const auto& r : rows)
    out << display_name(r.kind) << ',' << mode_label(r.mode) << ',' << r.critical.count << ','
        << metrics::format_percentage(r.critical.percentage) << '\n';
  return out.str();
}

std::vector<StatsRow> regional_report(std::span<const Dataset> datasets, double boundary_lon) {
  require_data(datasets);
  std::vector<StatsRow> rows;
  for (const auto kind : kAllDelayKinds) {
    for (const auto& d : datasets) {
      const auto split = region_split(d, boundary_lon);
      for (const auto& [name, part] : {std::pair{"East", &split.east}, std::pair{"West", &split.west}}) {
        const auto values = part->delays(kind);
        if (values.empty()) continue;
        rows.push_back({kind, d.mode(), name, values.size(), metrics::summary(values)});
      }
    }
  }
  return rows;
}

std::vector<StatsRow> summary_report(std::span<const Dataset> datasets) {
  require_data(datasets);
  std::vector<StatsRow> rows;
  for (const auto kind : kAllDelayKinds) {
    for (const auto& d : datasets) {
      const auto values = d.delays(kind);
      if (values.empty()) continue;
      rows.push_back({kind, d.mode(), "", values.size(), metrics::summary(values)});
    }
  }
  return rows;
}

std::string stats_csv(std::span<const StatsRow> rows, bool with_region) {
  std::ostringstream out;
  out << "Delay,Measurement Mode" << (with_region ? ",Region" : "")
      << ",Mean,Min,25%,50%,75%,Max\n";
  for (const auto& r : rows) {
    out << display_name(r.kind) << ',' << mode_label(r.mode);
    if (with_region) out << ',' << r.region;
    const auto& s = r.stats;
    for (const double v : {s.mean, s.min, s.q25, s.median, s.q75, s.max}) out << ',' << two_decimals(v);
    out << '\n';
  }
  return out.str();
}

std::optional<int> delay_bucket(double delay_ms, double threshold_ms, std::span<const double> sorted) {
  if (delay_ms > threshold_ms) return std::nullopt;
  if (sorted.empty()) return 0;
  int bucket = 0;
  for (const double p : {0.2, 0.4, 0.6, 0.8})
    if (delay_ms > metrics::quantile_sorted(sorted, p)) ++bucket;
  return bucket;
}

nlohmann::json export_geojson(const Dataset& dataset, DelayKind kind) {
  const double threshold = critical_threshold_ms(kind);
  std::vector<double> calm;
  for (const double v : dataset.delays(kind))
    if (v <= threshold) calm.push_back(v);
  std::sort(calm.begin(), calm.end());

  nlohmann::json features = nlohmann::json::array();
  for (const auto& r : dataset) {
    const auto delay = r.delay(kind);
    if (!delay) continue;
    const auto bucket = delay_bucket(*delay, threshold, calm);
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {r.lon, r.lat}}}},
        {"properties",
         {{"delay_ms", *delay},
          {"delay_kind", token(kind)},
          {"mode", mode_code(dataset.mode())},
          {"critical", *delay > threshold},
          {"bucket", bucket ? nlohmann::json(*bucket) : nlohmann::json(nullptr)},
          {"timestamp_s", r.timestamp_s}}},
    });
  }
  if (features.empty())
    throw InputError("dataset has no " + std::string(display_name(kind)) + " delays");
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

} // namespace raildelay::pipeline
