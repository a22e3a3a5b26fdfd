#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace raildelay::sim {

/// Packet replication: every packet goes over all links and the first copy to
/// arrive counts. Unavailable links are nullopt; if none is available the
/// sample is a gap (nullopt).
std::optional<double> route_pr(std::span<const std::optional<double>> link_delays_ms);
double route_pr(std::span<const double> link_delays_ms);

struct RoutingConfig {
  std::int64_t assessment_period_s = 5;
  double assessment_overhead_ms = 20.0;

  void validate() const;
  bool operator==(const RoutingConfig&) const = default;
};

/// Best-quality router. At every multiple of the assessment period it picks the
/// operator with the strongest RSRP (lowest index on ties) and charges the
/// assessment overhead to samples at that instant; between assessments the
/// selection is kept even when conditions change.
class BqRouter {
public:
  explicit BqRouter(RoutingConfig config = {}) : config_(config) {}

  /// Delay of the sample sent at `t`. Repeated calls at the same `t` reuse
  /// that instant's assessment.
  std::optional<double> route(std::int64_t t, std::span<const double> rsrp_dbm,
                              std::span<const std::optional<double>> link_delays_ms);
  double route(std::int64_t t, std::span<const double> rsrp_dbm,
               std::span<const double> link_delays_ms);

  std::optional<std::size_t> selected() const { return selected_; }
  const RoutingConfig& config() const { return config_; }

private:
  bool assess(std::int64_t t, std::span<const double> rsrp_dbm);

  RoutingConfig config_;
  std::optional<std::size_t> selected_;
  std::optional<std::int64_t> last_assessment_;
};

} // namespace raildelay::sim
