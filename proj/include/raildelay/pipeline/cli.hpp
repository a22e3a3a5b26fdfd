#pragma once

#include <cstdint>
#include <optional>
#include <ostream>

namespace raildelay::pipeline {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInternalError = 3;

inline constexpr std::uint64_t kDefaultTrainSeed = 42;

/// Seed precedence: explicit flag, then RAILDELAY_SEED, then `fallback`.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback);

/// Entry point of the raildelay tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace raildelay::pipeline
