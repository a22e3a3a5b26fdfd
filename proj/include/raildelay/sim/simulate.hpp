#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "raildelay/core/record.hpp"
#include "raildelay/sim/scenario.hpp"

namespace raildelay::sim {

/// Per-link delays behind one routed sample, kept for invariant audits.
struct LinkSample {
  std::int64_t timestamp_s = 0;
  DelayKind kind = DelayKind::PositionReport;
  std::array<std::optional<double>, kOperatorCount> link_delays_ms{};
  std::size_t bq_operator = 0;  // 0-based operator chosen by the BQ router
};

/// Paired BQ and PR datasets over one random realization.
struct Campaign {
  Dataset bq{Mode::BestQuality};
  Dataset pr{Mode::PacketReplication};
  std::array<std::size_t, kOperatorCount> handovers{};
  std::vector<LinkSample> link_samples;
};

/// Cell sites actually used for `op`: its explicit list, or a layout generated
/// along the track from the scenario seed.
std::vector<CellSite> materialize_sites(const ScenarioConfig& config, std::size_t op_index);

/// Runs the campaign. Both datasets share timestamps, positions, KPIs and the
/// per-link delay draws; they differ only in routing. Deterministic in the seed.
Campaign simulate(const ScenarioConfig& config);

} // namespace raildelay::sim
