#include "raildelay/sim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "raildelay/core/record.hpp"

namespace raildelay::sim {

double path_rsrp(const CellSite& site, double distance_m, double shadow_db) {
  const double d = std::max(distance_m, kReferenceDistanceM);
  const double rsrp = site.ref_power_dbm -
                      10.0 * kPathLossExponent * std::log10(d / kReferenceDistanceM) +
                      shadow_db;
  return std::clamp(rsrp, kRsrpMin, kRsrpMax);
}

double rsrq_from_rsrp(double rsrp_dbm) {
  return std::clamp(-3.0 - (-40.0 - rsrp_dbm) / 10.0, kRsrqMin, kRsrqMax);
}

double snr_from_rsrp(double rsrp_dbm) {
  return std::clamp((rsrp_dbm + 110.0) / 2.0, kSnrMin, kSnrMax);
}

double ground_distance_m(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kEarthRadiusM = 6371008.8;
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * kRad) * std::cos(b.lat * kRad) *
                       std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

} // namespace raildelay::sim
