#include "raildelay/sim/router.hpp"

#include <algorithm>
#include <vector>

#include "raildelay/core/error.hpp"

namespace raildelay::sim {

std::optional<double> route_pr(std::span<const std::optional<double>> link_delays_ms) {
  std::optional<double> best;
  for (const auto& d : link_delays_ms)
    if (d && (!best || *d < *best)) best = d;
  return best;
}

double route_pr(std::span<const double> link_delays_ms) {
  if (link_delays_ms.empty()) throw InputError("packet replication needs at least one link");
  return *std::ranges::min_element(link_delays_ms);
}

void RoutingConfig::validate() const {
  if (assessment_period_s < 1) throw InputError("assessment_period_s must be >= 1");
  if (!(assessment_overhead_ms >= 0.0)) throw InputError("assessment_overhead_ms must be >= 0");
}

bool BqRouter::assess(std::int64_t t, std::span<const double> rsrp_dbm) {
  const bool instant = t % config_.assessment_period_s == 0;
  if ((instant || !selected_) && last_assessment_ != t) {
    selected_ = static_cast<std::size_t>(
        std::distance(rsrp_dbm.begin(), std::ranges::max_element(rsrp_dbm)));
    last_assessment_ = t;
  }
  return instant;
}

std::optional<double> BqRouter::route(std::int64_t t, std::span<const double> rsrp_dbm,
                                      std::span<const std::optional<double>> link_delays_ms) {
  const bool instant = assess(t, rsrp_dbm);
  const auto& d = link_delays_ms[*selected_];
  if (!d) return std::nullopt;
  return instant ? *d + config_.assessment_overhead_ms : *d;
}

double BqRouter::route(std::int64_t t, std::span<const double> rsrp_dbm,
                       std::span<const double> link_delays_ms) {
  std::vector<std::optional<double>> wrapped(link_delays_ms.begin(), link_delays_ms.end());
  return *route(t, rsrp_dbm, wrapped);
}

} // namespace raildelay::sim
