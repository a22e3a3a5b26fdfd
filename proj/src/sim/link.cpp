#include "raildelay/sim/link.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "raildelay/core/error.hpp"

namespace raildelay::sim {

void OperatorNetwork::validate() const {
  const std::string who = "operator " + std::to_string(id) + ": ";
  if (!(base_delay_ms > 0.0)) throw InputError(who + "base_delay_ms must be > 0");
  if (!(jitter_scale_ms >= 0.0)) throw InputError(who + "jitter_scale_ms must be >= 0");
  if (!(jitter_sigma >= 0.0)) throw InputError(who + "jitter_sigma must be >= 0");
  if (!(handover_spike_mean_ms >= 0.0))
    throw InputError(who + "handover_spike_mean_ms must be >= 0");
  if (!(handover_hysteresis_db >= 0.0))
    throw InputError(who + "handover_hysteresis_db must be >= 0");
  if (!(shadowing_sigma_db >= 0.0)) throw InputError(who + "shadowing_sigma_db must be >= 0");
  if (!(shadowing_corr >= 0.0 && shadowing_corr < 1.0))
    throw InputError(who + "shadowing_corr must lie in [0, 1)");
  if (!(quality_slope_ms_per_db >= 0.0) || !(speed_slope_ms_per_kmh >= 0.0))
    throw InputError(who + "delay slopes must be >= 0");
  if (!(rsrq_noise_db >= 0.0) || !(snr_noise_db >= 0.0))
    throw InputError(who + "KPI noise must be >= 0");
  for (const auto& site : sites) {
    if (site.operator_id != id) throw InputError(who + "site belongs to another operator");
    if (!(site.ref_power_dbm >= -70.0 && site.ref_power_dbm <= -40.0))
      throw InputError(who + "site ref_power must lie in [-70, -40] dBm");
  }
  if (sites.empty()) {
    if (!(layout.spacing_km > 0.0)) throw InputError(who + "site_spacing_km must be > 0");
    if (!(layout.spacing_jitter >= 0.0 && layout.spacing_jitter < 1.0))
      throw InputError(who + "site_spacing_jitter must lie in [0, 1)");
    if (!(layout.lateral_m >= 0.0)) throw InputError(who + "site_lateral_m must be >= 0");
    if (!(layout.ref_power_dbm >= -70.0 && layout.ref_power_dbm <= -40.0))
      throw InputError(who + "site_ref_power_dbm must lie in [-70, -40]");
    if (!(layout.ref_power_spread_db >= 0.0))
      throw InputError(who + "site_ref_power_spread_db must be >= 0");
  }
}

double OperatorLink::spike_residue() const {
  if (spike_age >= kSpikeDecaySamples) return 0.0;
  return spike_ms * static_cast<double>(kSpikeDecaySamples - spike_age) / kSpikeDecaySamples;
}

bool update_serving(OperatorLink& link, std::span<const double> site_rsrp,
                    double hysteresis_db, double spike_mean_ms, Rng& rng) {
  if (site_rsrp.empty()) return false;
  const auto best = static_cast<std::size_t>(
      std::distance(site_rsrp.begin(), std::ranges::max_element(site_rsrp)));
  bool switched = false;
  if (best != link.serving_site && site_rsrp[best] > site_rsrp[link.serving_site] + hysteresis_db) {
    link.serving_site = best;
    link.spike_ms = 0.0;
    if (spike_mean_ms > 0.0) link.spike_ms = std::exponential_distribution<double>(1.0 / spike_mean_ms)(rng);
    link.spike_age = 0;
    switched = true;
  }
  link.serving_rsrp_dbm = site_rsrp[link.serving_site];
  return switched;
}

void advance_spike(OperatorLink& link) {
  if (link.spike_age < kSpikeDecaySamples) ++link.spike_age;
}

double quality_penalty_ms(const OperatorNetwork& op, double rsrp_dbm) {
  return op.quality_slope_ms_per_db * std::max(0.0, op.quality_knee_dbm - rsrp_dbm);
}

double link_delay(const OperatorNetwork& op, const OperatorLink& link, double kind_offset_ms,
                  double speed_kmh, Rng& rng) {
  double jitter = 0.0;
  if (op.jitter_scale_ms > 0.0)
    jitter = std::lognormal_distribution<double>(std::log(op.jitter_scale_ms), op.jitter_sigma)(rng);
  const double delay = op.base_delay_ms + kind_offset_ms +
                       quality_penalty_ms(op, link.serving_rsrp_dbm) +
                       op.speed_slope_ms_per_kmh * speed_kmh + jitter + link.spike_residue();
  return std::max(delay, 0.01);
}

} // namespace raildelay::sim
