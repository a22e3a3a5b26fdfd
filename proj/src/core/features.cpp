#include "raildelay/core/features.hpp"

#include <string>

#include "raildelay/core/error.hpp"

namespace raildelay {

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names{
      "op1_rsrp", "op1_rsrq", "op1_snr", "op2_rsrp", "op2_rsrq",
      "op2_snr",  "op3_rsrp", "op3_rsrq", "op3_snr", "speed_kmh"};
  return names;
}

std::array<double, kFeatureCount> feature_row(const MeasurementRecord& r) {
  std::array<double, kFeatureCount> row{};
  for (std::size_t op = 0; op < kOperatorCount; ++op) {
    row[3 * op] = r.kpis[op].rsrp.value();
    row[3 * op + 1] = r.kpis[op].rsrq.value();
    row[3 * op + 2] = r.kpis[op].snr.value();
  }
  row[kSpeedFeature] = r.speed_kmh;
  return row;
}

namespace {

FeatureMatrix assemble(const Dataset& dataset, const std::vector<std::size_t>& rows) {
  FeatureMatrix fm;
  fm.values.resize(static_cast<Eigen::Index>(rows.size()), kFeatureCount);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = feature_row(dataset[rows[i]]);
    for (std::size_t c = 0; c < kFeatureCount; ++c)
      fm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c];
  }
  return fm;
}

} // namespace

FeatureSet to_features(const Dataset& dataset, DelayKind kind) {
  if (dataset.empty()) throw InputError("cannot assemble features from an empty dataset");
  FeatureSet out;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    if (dataset[i].delay(kind) && dataset[i].has_complete_kpis()) out.row_index.push_back(i);
  if (out.row_index.empty())
    throw InputError("no records carry a " + std::string(display_name(kind)) +
                     " delay with complete KPIs");
  out.features = assemble(dataset, out.row_index);
  out.targets.resize(static_cast<Eigen::Index>(out.row_index.size()));
  for (std::size_t i = 0; i < out.row_index.size(); ++i)
    out.targets(static_cast<Eigen::Index>(i)) = *dataset[out.row_index[i]].delay(kind);
  return out;
}

FeatureMatrix feature_matrix(const Dataset& dataset, std::vector<std::size_t>& row_index) {
  row_index.clear();
  for (std::size_t i = 0; i < dataset.size(); ++i)
    if (dataset[i].has_complete_kpis()) row_index.push_back(i);
  return assemble(dataset, row_index);
}

} // namespace raildelay
