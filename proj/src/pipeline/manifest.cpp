#include "raildelay/pipeline/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "raildelay/core/error.hpp"

namespace raildelay::pipeline {

std::string digest_text(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},           {"config_digest", m.config_digest},
          {"seed", m.seed},                 {"inputs", m.inputs},
          {"outputs", m.outputs},           {"tool_version", m.tool_version},
          {"started_utc", m.started_utc},   {"finished_utc", m.finished_utc},
          {"details", m.details}};
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write manifest " + path.string());
  out << to_json(manifest).dump(2) << '\n';
}

} // namespace raildelay::pipeline
