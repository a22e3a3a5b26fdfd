#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "raildelay/core/delay_kind.hpp"

namespace raildelay {

enum class Mode : std::uint8_t { BestQuality, PacketReplication, GeneratedPR };

/// CSV code: BQ, PR, GEN_PR.
std::string_view mode_code(Mode mode);
/// Human-readable label used in report tables.
std::string_view mode_label(Mode mode);
std::optional<Mode> parse_mode_code(std::string_view code);

inline constexpr std::size_t kOperatorCount = 3;

// Standard LTE reporting ranges. Values outside are rejected on ingest.
inline constexpr double kRsrpMin = -140.0, kRsrpMax = -40.0;
inline constexpr double kRsrqMin = -20.0, kRsrqMax = -3.0;
inline constexpr double kSnrMin = -10.0, kSnrMax = 40.0;

/// Radio KPIs reported for one operator. A field may be missing on ingest;
/// such records are kept but excluded from feature assembly.
struct OperatorKpi {
  std::optional<double> rsrp; // dBm
  std::optional<double> rsrq; // dB
  std::optional<double> snr;  // dB

  bool complete() const { return rsrp && rsrq && snr; }
  bool operator==(const OperatorKpi&) const = default;
};

struct MeasurementRecord {
  std::int64_t timestamp_s = 0;
  double lat = 0.0;
  double lon = 0.0;
  double chainage_km = 0.0;
  double speed_kmh = 0.0;
  std::array<OperatorKpi, kOperatorCount> kpis{};
  std::array<std::optional<double>, kDelayKindCount> delays{};
  Mode mode = Mode::PacketReplication;

  std::optional<double> delay(DelayKind kind) const { return delays[index_of(kind)]; }
  void set_delay(DelayKind kind, std::optional<double> ms) { delays[index_of(kind)] = ms; }
  bool has_complete_kpis() const;

  bool operator==(const MeasurementRecord&) const = default;
};

/// Throws InputError when a record breaks a record-level invariant.
void validate_record(const MeasurementRecord& record);

/// Mode-homogeneous, strictly time-ordered sequence of records.
class Dataset {
public:
  explicit Dataset(Mode mode = Mode::PacketReplication) : mode_(mode) {}
  Dataset(Mode mode, std::vector<MeasurementRecord> records);

  /// Validates the record, its mode, and timestamp ordering before appending.
  void push_back(MeasurementRecord record);

  Mode mode() const { return mode_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const MeasurementRecord& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<MeasurementRecord>& records() const { return records_; }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  /// Number of records that carry a delay of `kind`.
  std::size_t count(DelayKind kind) const;
  /// Values of `kind` in record order, skipping absent entries.
  std::vector<double> delays(DelayKind kind) const;

  bool operator==(const Dataset&) const = default;

private:
  Mode mode_;
  std::vector<MeasurementRecord> records_;
};

} // namespace raildelay
