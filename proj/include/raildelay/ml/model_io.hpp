#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "raildelay/core/error.hpp"
#include "raildelay/ml/ensemble.hpp"

namespace raildelay::ml {

/// Model file layout, all integers and IEEE-754 doubles little-endian:
///
///   magic        8 bytes  "RDLYMODL"
///   version      u32      kModelFormatVersion
///   ensemble     u8       0 forest, 1 boosted
///   preset       u8       0..3 ModelPreset, 255 custom
///   delay kind   u8       0..4 DelayKind, 255 unspecified
///   reserved     u8       0
///   seed, rows   u64, u64
///   init, lr     f64, f64
///   columns      u32 count, then per column u32 length + UTF-8 bytes
///   trees        u32 count, then per tree u32 node count and per node
///                i32 feature (-1 leaf), u32 left, u32 right, f64 threshold, f64 value
///   end marker   4 bytes  "END."
inline constexpr std::uint32_t kModelFormatVersion = 1;

class ModelFormatError : public InputError {
public:
  using InputError::InputError;
};

void save_model(std::ostream& out, const TrainedModel& model);
TrainedModel load_model(std::istream& in);

std::string save_model(const TrainedModel& model);
TrainedModel load_model(const std::string& bytes);

void save_model_file(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model_file(const std::filesystem::path& path);

} // namespace raildelay::ml
