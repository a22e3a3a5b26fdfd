#include <gtest/gtest.h>

#include <random>

#include "raildelay/core/error.hpp"
#include "raildelay/core/rng.hpp"
#include "raildelay/ml/ensemble.hpp"
#include "raildelay/ml/importance.hpp"

using namespace raildelay;
using namespace raildelay::ml;

namespace {

struct Data {
  FeatureMatrix X;
  Eigen::VectorXd y;
};

/// Ten named feature columns; the target depends on columns 0, 4 and 9 only.
Data synthetic(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Data d;
  d.X.values.resize(static_cast<Eigen::Index>(n), 10);
  d.y.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
    for (Eigen::Index f = 0; f < 10; ++f) d.X.values(i, f) = g(rng);
    d.y(i) = 50.0 + 4.0 * d.X.values(i, 9) + 2.0 * d.X.values(i, 0) * d.X.values(i, 4) + 0.5 * g(rng);
  }
  return d;
}

FeatureMatrix one_column(std::initializer_list<double> values) {
  FeatureMatrix X;
  X.values.resize(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) X.values(i++, 0) = v;
  X.columns = {"x"};
  return X;
}

} // namespace

TEST(Presets, MapToDocumentedConfigurations) {
  const auto f = forest_preset(9);
  EXPECT_EQ(f.n_trees, 100u);
  EXPECT_TRUE(f.bootstrap);
  EXPECT_EQ(f.feature_fraction, 1.0);
  EXPECT_EQ(f.tree.max_depth, 0);
  EXPECT_EQ(f.seed, 9u);

  const auto level = boost_preset(ModelPreset::BoostLevel100, 9);
  EXPECT_EQ(level.n_rounds, 100u);
  EXPECT_EQ(level.tree.growth, Growth::LevelWise);
  EXPECT_EQ(level.tree.max_depth, 6);
  EXPECT_EQ(level.learning_rate, 0.3);

  const auto leaf = boost_preset(ModelPreset::BoostLeaf100, 9);
  EXPECT_EQ(leaf.tree.growth, Growth::LeafWise);
  EXPECT_EQ(leaf.tree.max_leaves, 31u);
  EXPECT_EQ(leaf.learning_rate, 0.1);

  const auto d6 = boost_preset(ModelPreset::BoostDepth6LR01, 9);
  EXPECT_EQ(d6.tree.growth, Growth::LevelWise);
  EXPECT_EQ(d6.tree.max_depth, 6);
  EXPECT_EQ(d6.learning_rate, 0.1);

  EXPECT_EQ(parse_preset("forest"), ModelPreset::Forest100);
  EXPECT_EQ(parse_preset("BoostLevel100"), ModelPreset::BoostLevel100);
  EXPECT_EQ(parse_preset("boost-depth6"), ModelPreset::BoostDepth6LR01);
  EXPECT_FALSE(parse_preset("xgb"));
}

TEST(Forest, SingleTreeWithoutBootstrapEqualsFitTree) {
  const auto d = synthetic(200, 1);
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  const auto model = fit_forest(d.X, d.y, cfg);
  Rng rng(1);
  const auto tree = fit_tree(d.X.values, d.y, TreeConfig{}, rng);
  EXPECT_EQ(model.predict(d.X), tree.predict(d.X.values));
}

TEST(Forest, ConstantTarget) {
  const auto d = synthetic(100, 2);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(100, 12.5);
  const auto model = fit_forest(d.X, c, forest_preset(3));
  const auto probe = synthetic(50, 3);
  EXPECT_TRUE((model.predict(probe.X).array() == 12.5).all());
}

TEST(Forest, DeterministicAndMeanOfTrees) {
  const auto d = synthetic(300, 4);
  ForestConfig cfg = forest_preset(17);
  cfg.n_trees = 20;
  const auto a = fit_forest(d.X, d.y, cfg);
  const auto b = fit_forest(d.X, d.y, cfg);
  const auto probe = synthetic(100, 5);
  EXPECT_EQ(a.predict(probe.X), b.predict(probe.X));
  EXPECT_EQ(a, b);

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(probe.X.rows());
  for (const auto& t : a.trees) mean += t.predict(probe.X.values);
  mean /= static_cast<double>(a.trees.size());
  EXPECT_TRUE(a.predict(probe.X).isApprox(mean, 1e-15));
}

TEST(Forest, ClonesOfOneTreeBehaveLikeTheTree) {
  const auto d = synthetic(100, 6);
  Rng rng(1);
  TreeConfig cfg;
  cfg.max_depth = 4;
  const auto tree = fit_tree(d.X.values, d.y, cfg, rng);
  TrainedModel model;
  model.kind = EnsembleKind::Forest;
  model.trees.assign(8, tree);
  model.columns = feature_names();
  EXPECT_TRUE(model.predict(d.X).isApprox(tree.predict(d.X.values), 1e-15));
}

TEST(Forest, MemorisesDistinctRows) {
  const auto d = synthetic(20, 7);
  ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  EXPECT_EQ(fit_forest(d.X, d.y, cfg).predict(d.X), d.y);
}

TEST(Forest, FeatureSubsamplingStaysDeterministic) {
  const auto d = synthetic(200, 8);
  ForestConfig cfg = forest_preset(5);
  cfg.n_trees = 10;
  cfg.feature_fraction = 0.3;
  EXPECT_EQ(fit_forest(d.X, d.y, cfg).predict(d.X), fit_forest(d.X, d.y, cfg).predict(d.X));
  cfg.feature_fraction = 0.0;
  EXPECT_THROW(fit_forest(d.X, d.y, cfg), InputError);
}

TEST(Boosted, SingleFullStrengthRound) {
  const auto X = one_column({0.0, 1.0});
  const Eigen::Vector2d y(0.0, 10.0);
  BoostConfig cfg;
  cfg.n_rounds = 1;
  cfg.learning_rate = 1.0;
  const auto model = fit_boosted(X, y, cfg);
  EXPECT_EQ(model.init, 5.0);
  EXPECT_EQ(model.predict(X), y);
}

TEST(Boosted, SingleShrunkRound) {
  const auto X = one_column({0.0, 1.0});
  const Eigen::Vector2d y(0.0, 10.0);
  BoostConfig cfg;
  cfg.n_rounds = 1;
  cfg.learning_rate = 0.1;
  const auto p = fit_boosted(X, y, cfg).predict(X);
  EXPECT_DOUBLE_EQ(p(0), 4.5);
  EXPECT_DOUBLE_EQ(p(1), 5.5);
}

TEST(Boosted, ZeroTreesPredictInit) {
  TrainedModel model;
  model.kind = EnsembleKind::Boosted;
  model.init = 42.0;
  model.learning_rate = 0.1;
  model.trees.assign(5, RegressionTree({TreeNode{-1, 0, 0, 0, 0.0}}));
  model.columns = feature_names();
  const auto d = synthetic(10, 9);
  EXPECT_TRUE((model.predict(d.X).array() == 42.0).all());
}

TEST(Boosted, CompositionAndMonotoneTrainingError) {
  const auto d = synthetic(400, 10);
  for (const auto preset : {ModelPreset::BoostLevel100, ModelPreset::BoostLeaf100, ModelPreset::BoostDepth6LR01}) {
    std::vector<double> stages;
    const auto model = fit_boosted(d.X, d.y, boost_preset(preset, 1), &stages);
    ASSERT_EQ(stages.size(), 101u);
    for (std::size_t m = 1; m < stages.size(); ++m) EXPECT_LE(stages[m], stages[m - 1]) << "round " << m;

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d.X.rows());
    for (const auto& t : model.trees) sum += t.predict(d.X.values);
    const Eigen::VectorXd composed = (model.init + model.learning_rate * sum.array()).matrix();
    EXPECT_TRUE(model.predict(d.X).isApprox(composed, 1e-12));
  }
}

TEST(Boosted, ValidatesConfig) {
  const auto d = synthetic(10, 11);
  BoostConfig cfg;
  cfg.n_rounds = 0;
  EXPECT_THROW(fit_boosted(d.X, d.y, cfg), InputError);
  cfg.n_rounds = 1;
  cfg.learning_rate = 1.5;
  EXPECT_THROW(fit_boosted(d.X, d.y, cfg), InputError);
  EXPECT_THROW(fit_boosted(one_column({1.0}), Eigen::VectorXd::Constant(1, 1.0), BoostConfig{}), InputError);
}

TEST(Predict, RejectsColumnMismatch) {
  const auto d = synthetic(50, 12);
  ForestConfig cfg = forest_preset(1);
  cfg.n_trees = 2;
  const auto model = fit_forest(d.X, d.y, cfg);
  FeatureMatrix swapped = d.X;
  std::swap(swapped.columns[0], swapped.columns[1]);
  EXPECT_THROW(model.predict(swapped), InputError);
}

TEST(Importance, ConstantAndUnusedFeaturesScoreZero) {
  auto d = synthetic(300, 13);
  d.X.values.col(3).setConstant(1.0);
  BoostConfig cfg = boost_preset(ModelPreset::BoostDepth6LR01, 1);
  cfg.n_rounds = 20;
  const auto model = fit_boosted(d.X, d.y, cfg);
  const auto imp = permutation_importance(model, d.X, d.y, 3, 99);
  EXPECT_EQ(imp(3), 0.0);

  std::vector<bool> used(10, false);
  for (const auto& t : model.trees)
    for (const auto& n : t.nodes())
      if (!n.is_leaf()) used[static_cast<std::size_t>(n.feature)] = true;
  for (std::size_t f = 0; f < 10; ++f)
    if (!used[f]) EXPECT_EQ(imp(static_cast<Eigen::Index>(f)), 0.0) << "feature " << f;

  const auto ranking = importance_ranking(imp);
  EXPECT_EQ(ranking.front(), 9u);
  EXPECT_EQ(permutation_importance(model, d.X, d.y, 3, 99), imp);
}
