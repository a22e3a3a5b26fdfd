#include "raildelay/sim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "raildelay/core/csv.hpp"
#include "raildelay/core/error.hpp"

namespace raildelay::sim {

namespace {

using OpField = double OperatorNetwork::*;
using LayoutField = double SiteLayout::*;

const std::vector<std::pair<std::string_view, OpField>>& operator_fields() {
  static const std::vector<std::pair<std::string_view, OpField>> fields{
      {"base_delay_ms", &OperatorNetwork::base_delay_ms},
      {"jitter_scale_ms", &OperatorNetwork::jitter_scale_ms},
      {"jitter_sigma", &OperatorNetwork::jitter_sigma},
      {"handover_spike_mean_ms", &OperatorNetwork::handover_spike_mean_ms},
      {"handover_hysteresis_db", &OperatorNetwork::handover_hysteresis_db},
      {"shadowing_sigma_db", &OperatorNetwork::shadowing_sigma_db},
      {"shadowing_corr", &OperatorNetwork::shadowing_corr},
      {"quality_knee_dbm", &OperatorNetwork::quality_knee_dbm},
      {"quality_slope_ms_per_db", &OperatorNetwork::quality_slope_ms_per_db},
      {"speed_slope_ms_per_kmh", &OperatorNetwork::speed_slope_ms_per_kmh},
      {"coverage_floor_dbm", &OperatorNetwork::coverage_floor_dbm},
      {"rsrq_noise_db", &OperatorNetwork::rsrq_noise_db},
      {"snr_noise_db", &OperatorNetwork::snr_noise_db},
  };
  return fields;
}

const std::vector<std::pair<std::string_view, LayoutField>>& layout_fields() {
  static const std::vector<std::pair<std::string_view, LayoutField>> fields{
      {"site_spacing_km", &SiteLayout::spacing_km},
      {"site_spacing_jitter", &SiteLayout::spacing_jitter},
      {"site_lateral_m", &SiteLayout::lateral_m},
      {"site_ref_power_dbm", &SiteLayout::ref_power_dbm},
      {"site_ref_power_spread_db", &SiteLayout::ref_power_spread_db},
      {"site_phase_km", &SiteLayout::phase_km},
  };
  return fields;
}

std::string offset_key(DelayKind kind) {
  return "offset_" + std::string(token(kind)) + "_ms";
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw InputError("expected a number, got '" + std::string(text) + "'");
  return v;
}

template <typename Int>
Int to_integer(std::string_view text) {
  text = trim(text);
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw InputError("expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::vector<double> to_tuple(std::string_view text, std::size_t arity) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(to_double(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() != arity)
    throw InputError("expected " + std::to_string(arity) + " comma-separated values");
  return out;
}

void emit(std::ostringstream& out, std::string_view key, double v) {
  out << key << " = " << format_double(v) << '\n';
}

} // namespace

void ScenarioConfig::validate() const {
  if (track.vertices().size() < 2) throw InputError("track needs at least two vertices");
  run.validate();
  routing.validate();
  for (std::size_t i = 0; i < operators.size(); ++i) {
    if (operators[i].id != static_cast<int>(i + 1))
      throw InputError("operator ids must be 1, 2, 3 in order");
    operators[i].validate();
  }
  for (double off : kind_offsets_ms)
    if (!std::isfinite(off)) throw InputError("delay kind offsets must be finite");
  if (run.start_chainage_km >= track.length_km())
    throw InputError("run starts beyond the end of the track");
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.track = Track({{60.1719, 24.9414}, {60.4034, 25.1050}, {60.7377, 24.7773},
                   {60.9959, 24.4643}, {61.1667, 23.8680}, {61.4981, 23.7610},
                   {62.0130, 23.0250}, {62.7903, 22.8403}, {62.2460, 24.4580},
                   {62.2415, 25.7482}, {62.3000, 27.1333}, {62.8924, 27.6770},
                   {62.6010, 29.7636}, {61.5500, 29.5000}, {61.1719, 28.7526},
                   {61.0587, 28.1887}, {60.8679, 26.7042}, {60.9827, 25.6615},
                   {60.6339, 25.3181}});

  const std::array<double, 3> base{26.0, 29.0, 32.0};
  const std::array<double, 3> jitter{5.0, 6.0, 7.0};
  const std::array<double, 3> spacing{2.2, 2.6, 3.0};
  const std::array<double, 3> phase{0.0, 0.8, 1.6};
  for (std::size_t i = 0; i < kOperatorCount; ++i) {
    auto& op = c.operators[i];
    op.id = static_cast<int>(i + 1);
    op.base_delay_ms = base[i];
    op.jitter_scale_ms = jitter[i];
    op.layout.spacing_km = spacing[i];
    op.layout.phase_km = phase[i];
    op.jitter_sigma = 0.65;
  }

  c.run.duration_s = 20000;
  c.run.start_chainage_km = 0.0;
  c.run.profile = {{180, 0.0}, {300, 80.0}, {900, 160.0}, {600, 200.0}, {300, 120.0}, {420, 60.0}};

  c.kind_offsets_ms[index_of(DelayKind::PositionReport)] = 32.0;
  c.kind_offsets_ms[index_of(DelayKind::MovementAuthority)] = 58.0;
  c.kind_offsets_ms[index_of(DelayKind::Tcp)] = 6.0;
  c.kind_offsets_ms[index_of(DelayKind::Http)] = 42.0;
  c.kind_offsets_ms[index_of(DelayKind::Dns)] = 12.0;
  c.seed = 20220627;
  return c;
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig c = default_scenario();
  std::vector<GeoPoint> vertices;
  bool vertices_given = false;
  std::array<bool, kOperatorCount> sites_given{};
  bool segments_given = false;
  std::set<std::string> seen;  // section.key for scalar keys

  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw InputError("malformed section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        static const std::set<std::string> known{"track", "operator.1", "operator.2",
                                                 "operator.3", "run", "routing", "seed"};
        if (!known.contains(section)) throw InputError("unknown section [" + section + "]");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw InputError("expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      const std::string_view value = trim(line.substr(eq + 1));
      if (section.empty()) throw InputError("key '" + key + "' outside any section");

      const bool repeatable = key == "vertex" || key == "site" || key == "segment";
      if (!repeatable && !seen.insert(section + "." + key).second)
        throw InputError("duplicate key '" + key + "' in [" + section + "]");
      const auto unknown = [&] {
        return InputError("unknown key '" + key + "' in [" + section + "]");
      };

      if (section == "track") {
        if (key != "vertex") throw unknown();
        const auto v = to_tuple(value, 2);
        vertices_given = true;
        vertices.push_back({v[0], v[1]});
      } else if (section.starts_with("operator.")) {
        const std::size_t idx = static_cast<std::size_t>(section.back() - '1');
        auto& op = c.operators[idx];
        bool handled = false;
        for (const auto& [name, field] : operator_fields())
          if (key == name) { op.*field = to_double(value); handled = true; }
        for (const auto& [name, field] : layout_fields())
          if (key == name) { op.layout.*field = to_double(value); handled = true; }
        if (key == "site") {
          const auto v = to_tuple(value, 3);
          if (!sites_given[idx]) op.sites.clear();
          sites_given[idx] = true;
          op.sites.push_back({op.id, {v[0], v[1]}, v[2]});
          handled = true;
        }
        if (!handled) throw unknown();
      } else if (section == "run") {
        if (key == "duration_s") c.run.duration_s = to_integer<std::int64_t>(value);
        else if (key == "start_chainage_km") c.run.start_chainage_km = to_double(value);
        else if (key == "segment") {
          const auto v = to_tuple(value, 2);
          if (!segments_given) c.run.profile.clear();
          segments_given = true;
          const auto dur = static_cast<std::int64_t>(v[0]);
          if (static_cast<double>(dur) != v[0])
            throw InputError("segment duration must be a whole number of seconds");
          c.run.profile.push_back({dur, v[1]});
        } else throw unknown();
      } else if (section == "routing") {
        bool handled = false;
        if (key == "assessment_period_s") {
          c.routing.assessment_period_s = to_integer<std::int64_t>(value);
          handled = true;
        } else if (key == "assessment_overhead_ms") {
          c.routing.assessment_overhead_ms = to_double(value);
          handled = true;
        }
        for (DelayKind kind : kAllDelayKinds)
          if (key == offset_key(kind)) {
            c.kind_offsets_ms[index_of(kind)] = to_double(value);
            handled = true;
          }
        if (!handled) throw unknown();
      } else if (section == "seed") {
        if (key != "value") throw unknown();
        c.seed = to_integer<std::uint64_t>(value);
      }
    } catch (const InputError& e) {
      throw InputError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (vertices_given) c.track = Track(std::move(vertices));
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string to_config_text(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "# raildelay scenario (see `raildelay simulate --print-schema`)\n\n[track]\n";
  for (const auto& v : c.track.vertices())
    out << "vertex = " << format_double(v.lat) << ", " << format_double(v.lon) << '\n';
  for (const auto& op : c.operators) {
    out << "\n[operator." << op.id << "]\n";
    for (const auto& [name, field] : operator_fields()) emit(out, name, op.*field);
    if (op.sites.empty()) {
      for (const auto& [name, field] : layout_fields()) emit(out, name, op.layout.*field);
    } else {
      for (const auto& s : op.sites)
        out << "site = " << format_double(s.position.lat) << ", " << format_double(s.position.lon)
            << ", " << format_double(s.ref_power_dbm) << '\n';
    }
  }
  out << "\n[run]\nduration_s = " << c.run.duration_s << '\n';
  emit(out, "start_chainage_km", c.run.start_chainage_km);
  for (const auto& seg : c.run.profile)
    out << "segment = " << seg.duration_s << ", " << format_double(seg.speed_kmh) << '\n';
  out << "\n[routing]\nassessment_period_s = " << c.routing.assessment_period_s << '\n';
  emit(out, "assessment_overhead_ms", c.routing.assessment_overhead_ms);
  for (DelayKind kind : kAllDelayKinds) emit(out, offset_key(kind), c.kind_offset(kind));
  out << "\n[seed]\nvalue = " << c.seed << '\n';
  return out.str();
}

std::string scenario_schema() {
  return R"(Scenario configuration: sectioned key-value text.
Lines are `key = value`; `#` starts a comment. Omitted keys keep the built-in
default. Repeatable keys replace the default list on first use. Unknown
sections and keys are errors.

[track]
  vertex = <lat>, <lon>            repeatable, >= 2, WGS84 degrees, in travel order

[operator.1] [operator.2] [operator.3]
  base_delay_ms                    fixed one-way delay, > 0
  jitter_scale_ms                  median of the lognormal jitter, >= 0
  jitter_sigma                     lognormal shape, >= 0
  handover_spike_mean_ms           mean of the exponential handover spike, >= 0
  handover_hysteresis_db           margin a candidate cell must exceed, >= 0
  shadowing_sigma_db               AR(1) shadowing standard deviation, >= 0
  shadowing_corr                   per-second AR(1) coefficient, [0, 1)
  quality_knee_dbm                 RSRP below which the quality penalty applies
  quality_slope_ms_per_db          penalty per dB below the knee, >= 0
  speed_slope_ms_per_kmh           mobility load per km/h, >= 0
  coverage_floor_dbm               link unavailable below this serving RSRP
  rsrq_noise_db, snr_noise_db      Gaussian noise on derived KPIs, >= 0
  site = <lat>, <lon>, <ref_dbm>   repeatable explicit cell sites, ref in [-70, -40]
  site_spacing_km                  generated layout (used when no `site` lines)
  site_spacing_jitter              relative spacing jitter, [0, 1)
  site_lateral_m                   mean distance of sites from the track
  site_ref_power_dbm               mean reference power, [-70, -40]
  site_ref_power_spread_db         uniform spread of reference power
  site_phase_km                    chainage of the first generated site

[run]
  duration_s                       integer seconds, >= 1; samples at t = 0, 1, ...
  start_chainage_km                >= 0 and before the end of the track
  segment = <seconds>, <km/h>      repeatable piecewise-constant speed profile;
                                   cycles when shorter than the run

[routing]
  assessment_period_s              best-quality reassessment period, >= 1
  assessment_overhead_ms           added at assessment instants, >= 0
  offset_position_ms, offset_ma_ms, offset_tcp_ms, offset_http_ms, offset_dns_ms
                                   per-kind service time added to every link

[seed]
  value                            unsigned 64-bit master seed
                                   (RAILDELAY_SEED or --seed override it)
)";
}

} // namespace raildelay::sim
