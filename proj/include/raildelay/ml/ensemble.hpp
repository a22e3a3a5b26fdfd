#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "raildelay/core/delay_kind.hpp"
#include "raildelay/core/features.hpp"
#include "raildelay/ml/tree.hpp"

namespace raildelay::ml {

struct ForestConfig {
  std::size_t n_trees = 100;
  bool bootstrap = true;
  double feature_fraction = 1.0;
  TreeConfig tree{};
  std::uint64_t seed = 42;

  void validate() const;
};

/// Squared-error gradient boosting: F0 = mean(y), each round fits a tree to the
/// residuals and adds learning_rate times it.
struct BoostConfig {
  std::size_t n_rounds = 100;
  double learning_rate = 0.1;
  TreeConfig tree{};
  std::uint64_t seed = 42;

  void validate() const;
};

enum class ModelPreset : std::uint8_t {
  Forest100,        // bagged forest, 100 unbounded trees
  BoostLevel100,    // 100 rounds, level-wise depth 6, learning rate 0.3
  BoostLeaf100,     // 100 rounds, leaf-wise up to 31 leaves, learning rate 0.1
  BoostDepth6LR01,  // 100 rounds, level-wise depth 6, learning rate 0.1
};

inline constexpr std::array<ModelPreset, 4> kAllPresets{
    ModelPreset::Forest100, ModelPreset::BoostLevel100, ModelPreset::BoostLeaf100,
    ModelPreset::BoostDepth6LR01};

/// Table column name, e.g. "Forest100".
std::string_view preset_name(ModelPreset preset);
/// CLI token, e.g. "forest".
std::string_view preset_token(ModelPreset preset);
std::optional<ModelPreset> parse_preset(std::string_view text);

ForestConfig forest_preset(std::uint64_t seed);
BoostConfig boost_preset(ModelPreset preset, std::uint64_t seed);

enum class EnsembleKind : std::uint8_t { Forest, Boosted };

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::uint64_t rows = 0;
  std::optional<DelayKind> delay_kind;

  bool operator==(const TrainingMetadata&) const = default;
};

class TrainedModel {
public:
  EnsembleKind kind = EnsembleKind::Forest;
  std::optional<ModelPreset> preset;
  std::vector<RegressionTree> trees;
  double init = 0.0;           // boosted only
  double learning_rate = 1.0;  // boosted only
  std::vector<std::string> columns;
  TrainingMetadata metadata;

  /// Throws InputError when the matrix columns differ from the training columns.
  Eigen::VectorXd predict(const FeatureMatrix& X) const;
  /// Unchecked: rows must follow the training column order.
  Eigen::VectorXd predict_values(const Eigen::MatrixXd& X) const;

  template <typename Derived>
  double predict_row(const Eigen::DenseBase<Derived>& row) const {
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.predict(row);
    if (kind == EnsembleKind::Forest) return sum / static_cast<double>(trees.size());
    return init + learning_rate * sum;
  }

  std::string label() const;
  bool operator==(const TrainedModel&) const = default;
};

TrainedModel fit_forest(const FeatureMatrix& X, const Eigen::VectorXd& y, const ForestConfig& config);

/// `stage_rmse`, when given, receives the training RMSE after F0 and after
/// every round (n_rounds + 1 entries).
TrainedModel fit_boosted(const FeatureMatrix& X, const Eigen::VectorXd& y, const BoostConfig& config,
                         std::vector<double>* stage_rmse = nullptr);

TrainedModel fit_preset(ModelPreset preset, const FeatureMatrix& X, const Eigen::VectorXd& y,
                        std::uint64_t seed);

} // namespace raildelay::ml
