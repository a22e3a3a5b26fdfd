#include "raildelay/core/split.hpp"

#include <algorithm>
#include <cmath>

#include "raildelay/core/error.hpp"

namespace raildelay {

TimeSplit time_split(const Dataset& dataset, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InputError("train fraction must lie strictly between 0 and 1");
  if (dataset.size() < 2) throw InputError("time split needs at least two records");

  const auto n = dataset.size();
  // Tolerance absorbs representation error in products like 10 * 0.7.
  auto cut = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * train_fraction - 1e-9));
  cut = std::clamp<std::size_t>(cut, 1, n - 1);
  TimeSplit out{Dataset(dataset.mode()), Dataset(dataset.mode())};
  for (std::size_t i = 0; i < n; ++i)
    (i < cut ? out.train : out.test).push_back(dataset[i]);
  return out;
}

RegionSplit region_split(const Dataset& dataset, double boundary_lon) {
  if (!(boundary_lon >= -180.0 && boundary_lon <= 180.0))
    throw InputError("boundary longitude must lie within [-180, 180]");
  RegionSplit out{Dataset(dataset.mode()), Dataset(dataset.mode())};
  for (const auto& r : dataset)
    (r.lon >= boundary_lon ? out.east : out.west).push_back(r);
  return out;
}

} // namespace raildelay
