#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "raildelay/core/delay_kind.hpp"
#include "raildelay/sim/link.hpp"
#include "raildelay/sim/router.hpp"
#include "raildelay/sim/track.hpp"

namespace raildelay::sim {

/// Everything needed to reproduce one simulated measurement campaign.
struct ScenarioConfig {
  Track track;
  std::array<OperatorNetwork, kOperatorCount> operators;
  TrainRun run;
  RoutingConfig routing;
  std::array<double, kDelayKindCount> kind_offsets_ms{};  // additive service time per kind
  std::uint64_t seed = 0;

  double kind_offset(DelayKind kind) const { return kind_offsets_ms[index_of(kind)]; }
  /// Throws InputError on invalid values or when the run starts beyond the track.
  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Calibrated default: a ~1150 km two-lobe ring in southern Finland straddling
/// the 25.5 E boundary, a 20,000 s run, three staggered operators.
ScenarioConfig default_scenario();

/// Parses the sectioned key-value format described by scenario_schema().
/// Keys not given keep their default_scenario() values; a repeatable key
/// (vertex, site, segment) replaces the default list on first use.
/// Unknown sections or keys are errors.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::string& path);

/// Canonical text form; parse_scenario(to_config_text(c)) == c.
std::string to_config_text(const ScenarioConfig& config);

/// Reference documentation of every section and key.
std::string scenario_schema();

} // namespace raildelay::sim
