#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "raildelay/core/features.hpp"
#include "raildelay/ml/ensemble.hpp"

namespace raildelay::ml {

/// Mean increase in RMSE when one feature column is shuffled, per feature.
/// Each (feature, repeat) permutation uses its own seeded stream.
Eigen::VectorXd permutation_importance(const TrainedModel& model, const FeatureMatrix& X,
                                       const Eigen::VectorXd& y, std::size_t n_repeats,
                                       std::uint64_t seed);

/// Feature indices ordered by decreasing importance (stable on ties).
std::vector<std::size_t> importance_ranking(const Eigen::VectorXd& importance);

} // namespace raildelay::ml
