#pragma once

namespace raildelay::sim {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const GeoPoint&) const = default;
};

struct CellSite {
  int operator_id = 1;            // 1..3
  GeoPoint position;
  double ref_power_dbm = -55.0;   // at the reference distance, within [-70, -40]

  bool operator==(const CellSite&) const = default;
};

inline constexpr double kPathLossExponent = 3.5;
inline constexpr double kReferenceDistanceM = 100.0;

/// Log-distance path loss plus shadowing, clamped to the LTE RSRP range.
/// Distances below the reference distance are treated as the reference.
double path_rsrp(const CellSite& site, double distance_m, double shadow_db);

/// Noise-free RSRQ implied by an RSRP value, clamped to [-20, -3] dB.
double rsrq_from_rsrp(double rsrp_dbm);
/// Noise-free SNR implied by an RSRP value, clamped to [-10, 40] dB.
double snr_from_rsrp(double rsrp_dbm);

/// Great-circle distance in metres.
double ground_distance_m(const GeoPoint& a, const GeoPoint& b);

} // namespace raildelay::sim
