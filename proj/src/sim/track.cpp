#include "raildelay/sim/track.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "raildelay/core/error.hpp"

namespace raildelay::sim {

Track::Track(std::vector<GeoPoint> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw InputError("track needs at least two vertices");
  chainage_km_.reserve(vertices_.size());
  chainage_km_.push_back(0.0);
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const double step = ground_distance_m(vertices_[i - 1], vertices_[i]) / 1000.0;
    if (!(step > 0.0))
      throw InputError("track chainage must be strictly increasing (vertex " +
                       std::to_string(i + 1) + " repeats its predecessor)");
    chainage_km_.push_back(chainage_km_.back() + step);
  }
}

std::size_t Track::segment_at(double chainage_km) const {
  const auto it = std::upper_bound(chainage_km_.begin(), chainage_km_.end(), chainage_km);
  const auto idx = static_cast<std::size_t>(std::distance(chainage_km_.begin(), it));
  return std::clamp<std::size_t>(idx, 1, chainage_km_.size() - 1) - 1;
}

GeoPoint Track::position_at(double chainage_km) const {
  const double c = std::clamp(chainage_km, 0.0, length_km());
  const std::size_t s = segment_at(c);
  const double span = chainage_km_[s + 1] - chainage_km_[s];
  const double w = (c - chainage_km_[s]) / span;
  const GeoPoint& a = vertices_[s];
  const GeoPoint& b = vertices_[s + 1];
  return {a.lat + w * (b.lat - a.lat), a.lon + w * (b.lon - a.lon)};
}

std::pair<double, double> Track::heading_at(double chainage_km) const {
  const std::size_t s = segment_at(std::clamp(chainage_km, 0.0, length_km()));
  const GeoPoint& a = vertices_[s];
  const GeoPoint& b = vertices_[s + 1];
  const double coslat = std::cos((a.lat + b.lat) * 0.5 * std::numbers::pi / 180.0);
  const double east = (b.lon - a.lon) * coslat;
  const double north = b.lat - a.lat;
  const double norm = std::hypot(east, north);
  return {east / norm, north / norm};
}

double TrainRun::speed_at(std::int64_t t) const {
  std::int64_t cycle = 0;
  for (const auto& seg : profile) cycle += seg.duration_s;
  std::int64_t offset = t % cycle;
  for (const auto& seg : profile) {
    if (offset < seg.duration_s) return seg.speed_kmh;
    offset -= seg.duration_s;
  }
  return profile.back().speed_kmh;
}

void TrainRun::validate() const {
  if (profile.empty()) throw InputError("train run needs at least one speed segment");
  for (const auto& seg : profile) {
    if (seg.duration_s < 1) throw InputError("speed segment duration must be >= 1 s");
    if (!(seg.speed_kmh >= 0.0) || !std::isfinite(seg.speed_kmh))
      throw InputError("speed segment speeds must be finite and non-negative");
  }
  if (duration_s < 1) throw InputError("run duration must be >= 1 s");
  if (!(start_chainage_km >= 0.0)) throw InputError("start chainage must be non-negative");
}

} // namespace raildelay::sim
