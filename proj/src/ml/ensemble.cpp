#include "raildelay/ml/ensemble.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "raildelay/core/error.hpp"
#include "raildelay/metrics/metrics.hpp"

namespace raildelay::ml {

void ForestConfig::validate() const {
  if (n_trees < 1) throw InputError("forest needs at least one tree");
  if (!(feature_fraction > 0.0 && feature_fraction <= 1.0))
    throw InputError("feature_fraction must lie in (0, 1]");
  tree.validate();
}

void BoostConfig::validate() const {
  if (n_rounds < 1) throw InputError("boosting needs at least one round");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0))
    throw InputError("learning_rate must lie in (0, 1]");
  tree.validate();
}

std::string_view preset_name(ModelPreset preset) {
  switch (preset) {
  case ModelPreset::Forest100: return "Forest100";
  case ModelPreset::BoostLevel100: return "BoostLevel100";
  case ModelPreset::BoostLeaf100: return "BoostLeaf100";
  case ModelPreset::BoostDepth6LR01: return "BoostDepth6LR01";
  }
  return "?";
}

std::string_view preset_token(ModelPreset preset) {
  switch (preset) {
  case ModelPreset::Forest100: return "forest";
  case ModelPreset::BoostLevel100: return "boost-level";
  case ModelPreset::BoostLeaf100: return "boost-leaf";
  case ModelPreset::BoostDepth6LR01: return "boost-depth6";
  }
  return "?";
}

std::optional<ModelPreset> parse_preset(std::string_view text) {
  std::string lower(text);
  std::ranges::transform(lower, lower.begin(),
                         [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (ModelPreset p : kAllPresets) {
    std::string name(preset_name(p));
    std::ranges::transform(name, name.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == name || lower == preset_token(p)) return p;
  }
  return std::nullopt;
}

ForestConfig forest_preset(std::uint64_t seed) {
  ForestConfig c;
  c.n_trees = 100;
  c.bootstrap = true;
  c.feature_fraction = 1.0;
  c.seed = seed;
  return c;
}

BoostConfig boost_preset(ModelPreset preset, std::uint64_t seed) {
  BoostConfig c;
  c.n_rounds = 100;
  c.seed = seed;
  switch (preset) {
  case ModelPreset::BoostLevel100:
    c.learning_rate = 0.3;
    c.tree.max_depth = 6;
    c.tree.growth = Growth::LevelWise;
    break;
  case ModelPreset::BoostLeaf100:
    c.learning_rate = 0.1;
    c.tree.max_leaves = 31;
    c.tree.growth = Growth::LeafWise;
    break;
  case ModelPreset::BoostDepth6LR01:
    c.learning_rate = 0.1;
    c.tree.max_depth = 6;
    c.tree.growth = Growth::LevelWise;
    break;
  case ModelPreset::Forest100:
    throw InputError("Forest100 is not a boosted preset");
  }
  return c;
}

Eigen::VectorXd TrainedModel::predict(const FeatureMatrix& X) const {
  if (X.columns != columns)
    throw InputError("feature columns do not match the columns the model was trained on");
  return predict_values(X.values);
}

Eigen::VectorXd TrainedModel::predict_values(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index r = 0; r < X.rows(); ++r) out(r) = predict_row(X.row(r));
  return out;
}

std::string TrainedModel::label() const {
  if (preset) return std::string(preset_name(*preset));
  return kind == EnsembleKind::Forest ? "CustomForest" : "CustomBoost";
}

namespace {

void check_training(const FeatureMatrix& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw InputError("feature rows and targets differ in length");
  if (X.rows() < 2) throw InputError("training needs at least two rows");
  if (X.columns.size() != static_cast<std::size_t>(X.cols()))
    throw InputError("feature matrix column names do not match its width");
}

} // namespace

TrainedModel fit_forest(const FeatureMatrix& X, const Eigen::VectorXd& y, const ForestConfig& config) {
  check_training(X, y);
  config.validate();
  TrainedModel model;
  model.kind = EnsembleKind::Forest;
  model.columns = X.columns;
  model.metadata.seed = config.seed;
  model.metadata.rows = static_cast<std::uint64_t>(X.rows());

  const auto n = static_cast<std::size_t>(X.rows());
  std::vector<std::size_t> rows(n);
  model.trees.reserve(config.n_trees);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    Rng rng = make_stream(config.seed, t);
    if (config.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& r : rows) r = pick(rng);
    } else {
      for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    }
    model.trees.push_back(fit_tree(X.values, y, rows, config.tree, rng, config.feature_fraction));
  }
  return model;
}

TrainedModel fit_boosted(const FeatureMatrix& X, const Eigen::VectorXd& y, const BoostConfig& config,
                         std::vector<double>* stage_rmse) {
  check_training(X, y);
  config.validate();
  TrainedModel model;
  model.kind = EnsembleKind::Boosted;
  model.columns = X.columns;
  model.learning_rate = config.learning_rate;
  model.metadata.seed = config.seed;
  model.metadata.rows = static_cast<std::uint64_t>(X.rows());
  model.init = y.mean();

  Eigen::VectorXd fitted = Eigen::VectorXd::Constant(y.size(), model.init);
  if (stage_rmse) {
    stage_rmse->clear();
    stage_rmse->push_back(metrics::rmse(y, fitted));
  }
  Rng rng = make_stream(config.seed, 0);
  model.trees.reserve(config.n_rounds);
  for (std::size_t m = 0; m < config.n_rounds; ++m) {
    const Eigen::VectorXd residual = y - fitted;
    RegressionTree tree = fit_tree(X.values, residual, config.tree, rng);
    fitted += config.learning_rate * tree.predict(X.values);
    model.trees.push_back(std::move(tree));
    if (stage_rmse) stage_rmse->push_back(metrics::rmse(y, fitted));
  }
  return model;
}

TrainedModel fit_preset(ModelPreset preset, const FeatureMatrix& X, const Eigen::VectorXd& y,
                        std::uint64_t seed) {
  TrainedModel model = preset == ModelPreset::Forest100
                           ? fit_forest(X, y, forest_preset(seed))
                           : fit_boosted(X, y, boost_preset(preset, seed));
  model.preset = preset;
  return model;
}

} // namespace raildelay::ml
