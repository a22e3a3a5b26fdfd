#include "raildelay/core/record.hpp"

#include <cmath>
#include <string>

#include "raildelay/core/error.hpp"

namespace raildelay {

std::string_view mode_code(Mode mode) {
  switch (mode) {
  case Mode::BestQuality: return "BQ";
  case Mode::PacketReplication: return "PR";
  case Mode::GeneratedPR: return "GEN_PR";
  }
  return "?";
}

std::string_view mode_label(Mode mode) {
  switch (mode) {
  case Mode::BestQuality: return "Best Quality";
  case Mode::PacketReplication: return "Measured PR Mode";
  case Mode::GeneratedPR: return "Generated PR Mode";
  }
  return "?";
}

std::optional<Mode> parse_mode_code(std::string_view code) {
  if (code == "BQ") return Mode::BestQuality;
  if (code == "PR") return Mode::PacketReplication;
  if (code == "GEN_PR") return Mode::GeneratedPR;
  return std::nullopt;
}

bool MeasurementRecord::has_complete_kpis() const {
  for (const auto& kpi : kpis)
    if (!kpi.complete()) return false;
  return true;
}

namespace {

void check_range(const std::optional<double>& v, double lo, double hi,
                 std::string_view name, std::size_t op) {
  if (!v) return;
  if (!std::isfinite(*v) || *v < lo || *v > hi)
    throw InputError("op" + std::to_string(op + 1) + "_" + std::string(name) +
                     " out of range: " + std::to_string(*v));
}

} // namespace

void validate_record(const MeasurementRecord& r) {
  if (!std::isfinite(r.lat) || r.lat < -90.0 || r.lat > 90.0)
    throw InputError("latitude out of range");
  if (!std::isfinite(r.lon) || r.lon < -180.0 || r.lon > 180.0)
    throw InputError("longitude out of range");
  if (!std::isfinite(r.chainage_km)) throw InputError("chainage is not finite");
  if (!std::isfinite(r.speed_kmh) || r.speed_kmh < 0.0)
    throw InputError("speed must be finite and non-negative");
  for (std::size_t op = 0; op < kOperatorCount; ++op) {
    check_range(r.kpis[op].rsrp, kRsrpMin, kRsrpMax, "rsrp", op);
    check_range(r.kpis[op].rsrq, kRsrqMin, kRsrqMax, "rsrq", op);
    check_range(r.kpis[op].snr, kSnrMin, kSnrMax, "snr", op);
  }
  for (DelayKind kind : kAllDelayKinds) {
    const auto d = r.delay(kind);
    if (!d) continue;
    if (!std::isfinite(*d) || *d <= 0.0)
      throw InputError(std::string(csv_column(kind)) + " must be positive");
    if (!is_sampled_at(kind, r.timestamp_s))
      throw InputError(std::string(csv_column(kind)) + " present at unsampled timestamp " +
                       std::to_string(r.timestamp_s));
  }
}

Dataset::Dataset(Mode mode, std::vector<MeasurementRecord> records) : mode_(mode) {
  records_.reserve(records.size());
  for (auto& r : records) push_back(std::move(r));
}

void Dataset::push_back(MeasurementRecord record) {
  validate_record(record);
  if (record.mode != mode_)
    throw InputError("record mode " + std::string(mode_code(record.mode)) +
                     " does not match dataset mode " + std::string(mode_code(mode_)));
  if (!records_.empty() && record.timestamp_s <= records_.back().timestamp_s)
    throw InputError("non-monotonic timestamp " + std::to_string(record.timestamp_s));
  records_.push_back(std::move(record));
}

std::size_t Dataset::count(DelayKind kind) const {
  std::size_t n = 0;
  for (const auto& r : records_)
    if (r.delay(kind)) ++n;
  return n;
}

std::vector<double> Dataset::delays(DelayKind kind) const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_)
    if (auto d = r.delay(kind)) out.push_back(*d);
  return out;
}

} // namespace raildelay
