#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace raildelay {

/// The five measured delay types. Every kind is sampled once per second except
/// MovementAuthority (every 10 s); every kind is critical above 500 ms except
/// Http (1000 ms).
enum class DelayKind : std::uint8_t {
  PositionReport = 0,
  MovementAuthority = 1,
  Tcp = 2,
  Http = 3,
  Dns = 4,
};

inline constexpr std::size_t kDelayKindCount = 5;

inline constexpr std::array<DelayKind, kDelayKindCount> kAllDelayKinds{
    DelayKind::PositionReport, DelayKind::MovementAuthority, DelayKind::Tcp,
    DelayKind::Http, DelayKind::Dns};

constexpr std::size_t index_of(DelayKind kind) {
  return static_cast<std::size_t>(kind);
}

constexpr std::int64_t sampling_interval_s(DelayKind kind) {
  return kind == DelayKind::MovementAuthority ? 10 : 1;
}

constexpr double critical_threshold_ms(DelayKind kind) {
  return kind == DelayKind::Http ? 1000.0 : 500.0;
}

/// True when a sample of `kind` is taken at `timestamp_s`.
constexpr bool is_sampled_at(DelayKind kind, std::int64_t timestamp_s) {
  return timestamp_s % sampling_interval_s(kind) == 0;
}

/// "Position Report", "MA", "TCP", "HTTP", "DNS".
std::string_view display_name(DelayKind kind);
/// Short CLI token: position, ma, tcp, http, dns.
std::string_view token(DelayKind kind);
/// CSV column carrying this kind, e.g. delay_tcp_ms.
std::string_view csv_column(DelayKind kind);

/// Accepts the CLI token, the display name, or "Position" (case-insensitive).
std::optional<DelayKind> parse_delay_kind(std::string_view text);

} // namespace raildelay
