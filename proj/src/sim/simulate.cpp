#include "raildelay/sim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "raildelay/core/rng.hpp"

namespace raildelay::sim {

namespace {

enum Stream : std::uint64_t { kSiteStream = 1, kRadioStream = 2, kJitterStream = 3, kSpikeStream = 4 };

// Dividing by an exact power of ten yields the double nearest the decimal.
double round_to(double v, int decimals) {
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  return std::round(v * scale) / scale;
}

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMetresPerDegLat = 111320.0;

/// Local equirectangular frame; accurate to well under a percent over the
/// tens of kilometres that matter for a serving cell.
struct LocalFrame {
  double coslat;
  std::pair<double, double> project(const GeoPoint& p) const {
    return {p.lon * coslat * kMetresPerDegLat, p.lat * kMetresPerDegLat};
  }
};

} // namespace

std::vector<CellSite> materialize_sites(const ScenarioConfig& config, std::size_t op_index) {
  const OperatorNetwork& op = config.operators[op_index];
  if (!op.sites.empty()) return op.sites;

  Rng rng = make_stream(config.seed, kSiteStream * 16 + op_index);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const SiteLayout& lay = op.layout;
  std::vector<CellSite> sites;
  double c = lay.phase_km;
  int side = (op_index % 2 == 0) ? 1 : -1;
  while (c <= config.track.length_km()) {
    const GeoPoint on_track = config.track.position_at(c);
    const auto [east, north] = config.track.heading_at(c);
    const double lateral = lay.lateral_m * (1.0 + 0.5 * unit(rng)) * side;
    // Left-hand normal of the heading, in metres, then back to degrees.
    const double dn = east * lateral;
    const double de = -north * lateral;
    const double coslat = std::cos(on_track.lat * kDegToRad);
    CellSite site;
    site.operator_id = op.id;
    site.position = {on_track.lat + dn / kMetresPerDegLat,
                     on_track.lon + de / (kMetresPerDegLat * coslat)};
    site.ref_power_dbm =
        std::clamp(lay.ref_power_dbm + lay.ref_power_spread_db * unit(rng), -70.0, -40.0);
    sites.push_back(site);
    side = -side;
    c += lay.spacing_km * (1.0 + lay.spacing_jitter * unit(rng));
  }
  if (sites.empty()) {
    CellSite site;
    site.operator_id = op.id;
    site.position = config.track.position_at(0.0);
    site.ref_power_dbm = lay.ref_power_dbm;
    sites.push_back(site);
  }
  return sites;
}

Campaign simulate(const ScenarioConfig& config) {
  config.validate();
  Campaign out;

  double lat_sum = 0.0;
  for (const auto& v : config.track.vertices()) lat_sum += v.lat;
  const LocalFrame frame{std::cos(lat_sum / static_cast<double>(config.track.vertices().size()) * kDegToRad)};

  std::array<std::vector<CellSite>, kOperatorCount> sites;
  std::array<std::vector<std::pair<double, double>>, kOperatorCount> site_xy;
  std::array<std::vector<double>, kOperatorCount> site_rsrp;
  for (std::size_t op = 0; op < kOperatorCount; ++op) {
    sites[op] = materialize_sites(config, op);
    for (const auto& s : sites[op]) site_xy[op].push_back(frame.project(s.position));
    site_rsrp[op].resize(sites[op].size());
  }

  Rng radio = make_stream(config.seed, kRadioStream);
  Rng jitter = make_stream(config.seed, kJitterStream);
  Rng spikes = make_stream(config.seed, kSpikeStream);
  std::normal_distribution<double> gauss(0.0, 1.0);

  LinkState links{};
  BqRouter router(config.routing);
  double chainage = config.run.start_chainage_km;

  for (std::int64_t t = 0; t < config.run.duration_s; ++t) {
    if (chainage > config.track.length_km()) break;
    const double speed = config.run.speed_at(t);
    const GeoPoint pos = config.track.position_at(chainage);
    const auto [tx, ty] = frame.project(pos);

    MeasurementRecord rec;
    rec.timestamp_s = t;
    rec.lat = round_to(pos.lat, 6);
    rec.lon = round_to(pos.lon, 6);
    rec.chainage_km = round_to(chainage, 4);
    rec.speed_kmh = speed;

    std::array<double, kOperatorCount> rsrp{};
    for (std::size_t op = 0; op < kOperatorCount; ++op) {
      const OperatorNetwork& net = config.operators[op];
      OperatorLink& link = links[op];
      const double rho = net.shadowing_corr;
      link.shadow_db = t == 0 ? net.shadowing_sigma_db * gauss(radio)
                              : rho * link.shadow_db +
                                    net.shadowing_sigma_db * std::sqrt(1.0 - rho * rho) * gauss(radio);
      for (std::size_t s = 0; s < sites[op].size(); ++s) {
        const double d = std::hypot(site_xy[op][s].first - tx, site_xy[op][s].second - ty);
        site_rsrp[op][s] = path_rsrp(sites[op][s], d, link.shadow_db);
      }
      if (t == 0) {
        link.serving_site = static_cast<std::size_t>(
            std::distance(site_rsrp[op].begin(), std::ranges::max_element(site_rsrp[op])));
        link.serving_rsrp_dbm = site_rsrp[op][link.serving_site];
      } else if (update_serving(link, site_rsrp[op], net.handover_hysteresis_db,
                                net.handover_spike_mean_ms, spikes)) {
        ++out.handovers[op];
      }
      // Reported at measurement-tool resolution; the link sees what is reported.
      link.serving_rsrp_dbm = round_to(link.serving_rsrp_dbm, 1);
      rsrp[op] = link.serving_rsrp_dbm;
      rec.kpis[op].rsrp = rsrp[op];
      rec.kpis[op].rsrq = std::clamp(
          round_to(rsrq_from_rsrp(rsrp[op]) + net.rsrq_noise_db * gauss(radio), 1), kRsrqMin, kRsrqMax);
      rec.kpis[op].snr = std::clamp(
          round_to(snr_from_rsrp(rsrp[op]) + net.snr_noise_db * gauss(radio), 1), kSnrMin, kSnrMax);
    }

    MeasurementRecord bq_rec = rec;
    MeasurementRecord pr_rec = rec;
    bq_rec.mode = Mode::BestQuality;
    pr_rec.mode = Mode::PacketReplication;

    for (DelayKind kind : kAllDelayKinds) {
      if (!is_sampled_at(kind, t)) continue;
      LinkSample sample;
      sample.timestamp_s = t;
      sample.kind = kind;
      for (std::size_t op = 0; op < kOperatorCount; ++op) {
        const OperatorNetwork& net = config.operators[op];
        const double d = round_to(link_delay(net, links[op], config.kind_offset(kind), speed, jitter), 2);
        if (links[op].serving_rsrp_dbm >= net.coverage_floor_dbm)
          sample.link_delays_ms[op] = std::max(d, 0.01);
      }
      pr_rec.set_delay(kind, route_pr(sample.link_delays_ms));
      bq_rec.set_delay(kind, router.route(t, rsrp, sample.link_delays_ms));
      sample.bq_operator = *router.selected();
      out.link_samples.push_back(sample);
    }

    out.bq.push_back(std::move(bq_rec));
    out.pr.push_back(std::move(pr_rec));
    for (auto& link : links) advance_spike(link);
    chainage += speed / 3600.0;
  }
  return out;
}

} // namespace raildelay::sim
