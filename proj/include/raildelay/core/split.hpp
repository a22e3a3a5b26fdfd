#pragma once

#include "raildelay/core/record.hpp"

namespace raildelay {

inline constexpr double kDefaultTrainFraction = 0.7;
inline constexpr double kDefaultBoundaryLon = 25.5;

struct TimeSplit {
  Dataset train;
  Dataset test;
};

struct RegionSplit {
  Dataset east;
  Dataset west;
};

/// Chronological split: train holds the first ceil(n * fraction) records.
/// Requires at least two records and 0 < fraction < 1.
TimeSplit time_split(const Dataset& dataset, double train_fraction);

/// Records with lon >= boundary_lon go east, the rest west.
RegionSplit region_split(const Dataset& dataset, double boundary_lon = kDefaultBoundaryLon);

} // namespace raildelay
