#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "raildelay/core/record.hpp"
#include "raildelay/sim/propagation.hpp"
#include "raildelay/core/rng.hpp"

namespace raildelay::sim {

using raildelay::Rng;

/// Parameters for placing an operator's sites along the track when no explicit
/// site list is given.
struct SiteLayout {
  double spacing_km = 4.0;
  double spacing_jitter = 0.3;     // relative, uniform +-
  double lateral_m = 600.0;        // mean offset from the track
  double ref_power_dbm = -52.0;
  double ref_power_spread_db = 4.0;
  double phase_km = 0.0;           // chainage of the first site

  bool operator==(const SiteLayout&) const = default;
};

struct OperatorNetwork {
  int id = 1;
  std::vector<CellSite> sites;  // empty: generated from `layout`
  SiteLayout layout;

  double base_delay_ms = 28.0;
  double jitter_scale_ms = 3.0;   // lognormal median
  double jitter_sigma = 0.5;      // lognormal shape
  double handover_spike_mean_ms = 300.0;
  double handover_hysteresis_db = 3.0;
  double shadowing_sigma_db = 6.0;
  double shadowing_corr = 0.9;    // per-second AR(1) coefficient

  // Radio-quality and mobility load on the link.
  double quality_knee_dbm = -80.0;
  double quality_slope_ms_per_db = 1.2;
  double speed_slope_ms_per_kmh = 0.08;
  double coverage_floor_dbm = -125.0;  // link unavailable below this RSRP

  double rsrq_noise_db = 0.5;
  double snr_noise_db = 1.0;

  void validate() const;
  bool operator==(const OperatorNetwork&) const = default;
};

inline constexpr int kSpikeDecaySamples = 3;

/// Per-operator link state.
struct OperatorLink {
  std::size_t serving_site = 0;
  double shadow_db = 0.0;
  double serving_rsrp_dbm = kRsrpMin;
  double spike_ms = 0.0;
  int spike_age = kSpikeDecaySamples;  // samples since the last handover

  /// Handover delay still pending: linear decay to zero over three samples.
  double spike_residue() const;
};

using LinkState = std::array<OperatorLink, kOperatorCount>;

/// Moves service to the strongest site when it beats the serving site by more
/// than `hysteresis_db`, charging an exponential spike with mean
/// `spike_mean_ms`. Ties between candidates resolve to the lower site index.
/// Returns whether a handover happened.
bool update_serving(OperatorLink& link, std::span<const double> site_rsrp,
                    double hysteresis_db, double spike_mean_ms, Rng& rng);

/// Ages the pending handover spike by one sample.
void advance_spike(OperatorLink& link);

/// Delay added by a serving RSRP weaker than the operator's quality knee.
double quality_penalty_ms(const OperatorNetwork& op, double rsrp_dbm);

/// One-way delay of one packet over this operator:
/// base + kind offset + quality penalty + speed load + lognormal jitter + spike residue.
double link_delay(const OperatorNetwork& op, const OperatorLink& link, double kind_offset_ms,
                  double speed_kmh, Rng& rng);

} // namespace raildelay::sim
