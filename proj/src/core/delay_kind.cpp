#include "raildelay/core/delay_kind.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace raildelay {

namespace {

constexpr std::array<std::string_view, kDelayKindCount> kDisplay{
    "Position Report", "MA", "TCP", "HTTP", "DNS"};
constexpr std::array<std::string_view, kDelayKindCount> kToken{
    "position", "ma", "tcp", "http", "dns"};
constexpr std::array<std::string_view, kDelayKindCount> kColumn{
    "delay_position_ms", "delay_ma_ms", "delay_tcp_ms", "delay_http_ms",
    "delay_dns_ms"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::ranges::transform(out, out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

} // namespace

std::string_view display_name(DelayKind kind) { return kDisplay[index_of(kind)]; }
std::string_view token(DelayKind kind) { return kToken[index_of(kind)]; }
std::string_view csv_column(DelayKind kind) { return kColumn[index_of(kind)]; }

std::optional<DelayKind> parse_delay_kind(std::string_view text) {
  const std::string needle = lower(text);
  for (DelayKind kind : kAllDelayKinds) {
    if (needle == kToken[index_of(kind)] || needle == lower(kDisplay[index_of(kind)]))
      return kind;
  }
  if (needle == "position_report" || needle == "positionreport")
    return DelayKind::PositionReport;
  if (needle == "movement_authority" || needle == "movementauthority")
    return DelayKind::MovementAuthority;
  return std::nullopt;
}

} // namespace raildelay
