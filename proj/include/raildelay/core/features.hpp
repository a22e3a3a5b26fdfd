#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "raildelay/core/record.hpp"

namespace raildelay {

inline constexpr std::size_t kFeatureCount = 10;
inline constexpr std::size_t kSpeedFeature = 9;

/// Fixed column order: op1..op3 (rsrp, rsrq, snr), then speed_kmh.
const std::vector<std::string>& feature_names();

/// Dense design matrix, one row per selected record. Column names travel with
/// the values so a model can refuse a matrix assembled in a different order.
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> columns = feature_names();

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

struct FeatureSet {
  FeatureMatrix features;
  Eigen::VectorXd targets;             // ms, aligned with feature rows
  std::vector<std::size_t> row_index;  // feature row -> dataset record
};

std::array<double, kFeatureCount> feature_row(const MeasurementRecord& record);

/// One row per record carrying `kind` and a complete KPI set.
/// Throws InputError when nothing is selected.
FeatureSet to_features(const Dataset& dataset, DelayKind kind);

/// Feature rows for every record with complete KPIs, regardless of delays.
FeatureMatrix feature_matrix(const Dataset& dataset, std::vector<std::size_t>& row_index);

} // namespace raildelay
