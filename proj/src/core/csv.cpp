#include "raildelay/core/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "raildelay/core/error.hpp"

namespace raildelay {

namespace {

constexpr std::string_view kHeader =
    "timestamp_s,lat,lon,chainage_km,speed_kmh,"
    "op1_rsrp,op1_rsrq,op1_snr,op2_rsrp,op2_rsrq,op2_snr,op3_rsrp,op3_rsrq,op3_snr,"
    "mode,delay_position_ms,delay_ma_ms,delay_tcp_ms,delay_http_ms,delay_dns_ms";

constexpr std::size_t kFieldCount = 20;
constexpr std::size_t kModeField = 14;
constexpr std::size_t kFirstDelayField = 15;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::string_view name) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw InputError("malformed " + std::string(name) + " '" + std::string(field) + "'");
  return value;
}

std::optional<double> parse_optional(std::string_view field, std::string_view name) {
  if (field.empty()) return std::nullopt;
  return parse_number(field, name);
}

MeasurementRecord parse_row(std::string_view line) {
  static const auto names = split_fields(kHeader);
  const auto f = split_fields(line);
  if (f.size() != kFieldCount)
    throw InputError("expected " + std::to_string(kFieldCount) + " fields, found " +
                     std::to_string(f.size()));

  MeasurementRecord r;
  {
    const auto* end = f[0].data() + f[0].size();
    auto [ptr, ec] = std::from_chars(f[0].data(), end, r.timestamp_s);
    if (f[0].empty() || ec != std::errc{} || ptr != end)
      throw InputError("malformed timestamp_s '" + std::string(f[0]) + "'");
  }
  for (std::size_t i = 1; i <= 4; ++i)
    if (f[i].empty()) throw InputError("missing " + std::string(names[i]));
  r.lat = parse_number(f[1], names[1]);
  r.lon = parse_number(f[2], names[2]);
  r.chainage_km = parse_number(f[3], names[3]);
  r.speed_kmh = parse_number(f[4], names[4]);
  for (std::size_t op = 0; op < kOperatorCount; ++op) {
    const std::size_t base = 5 + 3 * op;
    r.kpis[op].rsrp = parse_optional(f[base], names[base]);
    r.kpis[op].rsrq = parse_optional(f[base + 1], names[base + 1]);
    r.kpis[op].snr = parse_optional(f[base + 2], names[base + 2]);
  }
  const auto mode = parse_mode_code(f[kModeField]);
  if (!mode) throw InputError("unknown mode '" + std::string(f[kModeField]) + "'");
  r.mode = *mode;
  for (DelayKind kind : kAllDelayKinds) {
    const std::size_t col = kFirstDelayField + index_of(kind);
    r.set_delay(kind, parse_optional(f[col], names[col]));
  }
  validate_record(r);
  return r;
}

void append_optional(std::string& out, const std::optional<double>& v) {
  if (v) out += format_double(*v);
}

} // namespace

std::string_view csv_header() { return kHeader; }

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

Dataset parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw InputError("line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw InputError("line 1: header does not match the measurement schema");

  std::optional<Dataset> dataset;
  std::optional<std::int64_t> last_ts;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    MeasurementRecord r;
    try {
      r = parse_row(line);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (last_ts && r.timestamp_s <= *last_ts)
      throw InputError("non-monotonic timestamp at line " + std::to_string(line_no));
    if (!dataset) dataset.emplace(r.mode);
    if (r.mode != dataset->mode())
      throw InputError("line " + std::to_string(line_no) + ": mixed modes in one dataset");
    last_ts = r.timestamp_s;
    dataset->push_back(std::move(r));
  }
  return dataset ? std::move(*dataset) : Dataset(Mode::PacketReplication);
}

Dataset parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_csv(in);
}

void write_csv(std::ostream& out, const Dataset& dataset) {
  out << kHeader << '\n';
  std::string row;
  for (const auto& r : dataset) {
    row.clear();
    row += std::to_string(r.timestamp_s);
    for (double v : {r.lat, r.lon, r.chainage_km, r.speed_kmh}) {
      row += ',';
      row += format_double(v);
    }
    for (const auto& kpi : r.kpis) {
      for (const auto* v : {&kpi.rsrp, &kpi.rsrq, &kpi.snr}) {
        row += ',';
        append_optional(row, *v);
      }
    }
    row += ',';
    row += mode_code(r.mode);
    for (const auto& d : r.delays) {
      row += ',';
      append_optional(row, d);
    }
    row += '\n';
    out << row;
  }
}

std::string to_csv(const Dataset& dataset) {
  std::ostringstream out;
  write_csv(out, dataset);
  return out.str();
}

Dataset read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return parse_csv(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_csv_file(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  write_csv(out, dataset);
}

} // namespace raildelay
