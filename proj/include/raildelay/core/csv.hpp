#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "raildelay/core/record.hpp"

namespace raildelay {

/// Header line of the measurement CSV schema (no trailing newline).
std::string_view csv_header();

/// Parses a measurement CSV. Empty fields become absent values. A header-only
/// input yields an empty PacketReplication dataset, since mode is per-row.
/// Throws InputError naming the offending line.
Dataset parse_csv(std::istream& in);
Dataset parse_csv(std::string_view text);

/// Numbers are written in shortest round-trip form, so parse_csv(write_csv(d)) == d.
void write_csv(std::ostream& out, const Dataset& dataset);
std::string to_csv(const Dataset& dataset);

Dataset read_csv_file(const std::filesystem::path& path);
void write_csv_file(const std::filesystem::path& path, const Dataset& dataset);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

} // namespace raildelay
