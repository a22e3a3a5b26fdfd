#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace raildelay::pipeline {

/// Written next to every command output so reruns can be audited.
struct RunManifest {
  std::string command;
  std::string config_digest;  // stable for identical configs / options
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string tool_version = RAILDELAY_VERSION;
  std::string started_utc;
  std::string finished_utc;
  nlohmann::json details = nlohmann::json::object();
};

/// "fnv1a64:<16 hex digits>" of the text.
std::string digest_text(std::string_view text);
std::string utc_now();

nlohmann::json to_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

} // namespace raildelay::pipeline
