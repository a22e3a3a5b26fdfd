#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "raildelay/core/record.hpp"
#include "raildelay/sim/scenario.hpp"

namespace testing_support {

/// A valid record with complete KPIs and every delay sampled at `t`.
inline raildelay::MeasurementRecord make_record(std::int64_t t, raildelay::Mode mode,
                                                double lon = 25.0, double speed = 80.0) {
  using namespace raildelay;
  MeasurementRecord r;
  r.timestamp_s = t;
  r.lat = 61.0;
  r.lon = lon;
  r.chainage_km = 0.1 * static_cast<double>(t);
  r.speed_kmh = speed;
  r.mode = mode;
  for (std::size_t op = 0; op < kOperatorCount; ++op) {
    r.kpis[op].rsrp = -80.0 - static_cast<double>(op) - 0.1 * static_cast<double>(t % 7);
    r.kpis[op].rsrq = -8.0;
    r.kpis[op].snr = 12.0 + static_cast<double>(op);
  }
  for (const auto kind : kAllDelayKinds)
    if (is_sampled_at(kind, t)) r.set_delay(kind, 40.0 + static_cast<double>(t));
  return r;
}

/// Default scenario shortened to `duration_s`.
inline raildelay::sim::ScenarioConfig short_scenario(std::int64_t duration_s, std::uint64_t seed = 7) {
  auto c = raildelay::sim::default_scenario();
  c.run.duration_s = duration_s;
  c.seed = seed;
  return c;
}

/// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("raildelay_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace testing_support
