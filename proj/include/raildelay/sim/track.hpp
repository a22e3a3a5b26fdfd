#pragma once

#include <cstdint>
#include <vector>

#include "raildelay/sim/propagation.hpp"

namespace raildelay::sim {

/// Polyline railway with cumulative chainage. Needs at least two vertices and
/// strictly increasing chainage (no repeated consecutive vertices).
class Track {
public:
  Track() = default;
  explicit Track(std::vector<GeoPoint> vertices);

  const std::vector<GeoPoint>& vertices() const { return vertices_; }
  const std::vector<double>& chainage_km() const { return chainage_km_; }
  double length_km() const { return chainage_km_.empty() ? 0.0 : chainage_km_.back(); }

  /// Linear interpolation along the polyline; clamps to the track ends.
  GeoPoint position_at(double chainage_km) const;
  /// Unit (east, north) direction of travel at `chainage_km`.
  std::pair<double, double> heading_at(double chainage_km) const;

  bool operator==(const Track& other) const { return vertices_ == other.vertices_; }

private:
  std::size_t segment_at(double chainage_km) const;

  std::vector<GeoPoint> vertices_;
  std::vector<double> chainage_km_;
};

struct SpeedSegment {
  std::int64_t duration_s = 0;
  double speed_kmh = 0.0;
  bool operator==(const SpeedSegment&) const = default;
};

/// Piecewise-constant speed profile. The profile repeats when the run lasts
/// longer than one pass through its segments.
struct TrainRun {
  std::vector<SpeedSegment> profile;
  std::int64_t duration_s = 0;
  double start_chainage_km = 0.0;

  double speed_at(std::int64_t t) const;
  void validate() const;
  bool operator==(const TrainRun&) const = default;
};

} // namespace raildelay::sim
