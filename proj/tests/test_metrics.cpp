#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "raildelay/core/error.hpp"
#include "raildelay/core/rng.hpp"
#include "raildelay/metrics/metrics.hpp"
#include "raildelay/metrics/summary.hpp"

using namespace raildelay;
using namespace raildelay::metrics;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

} // namespace

TEST(Rmse, Examples) {
  EXPECT_EQ(rmse(vec({1, 2, 3}), vec({1, 2, 3})), 0.0);
  EXPECT_DOUBLE_EQ(rmse(vec({0, 0}), vec({3, 4})), std::sqrt(12.5));
  EXPECT_THROW(rmse(vec({1}), vec({1, 2})), InputError);
  EXPECT_THROW(rmse(Eigen::VectorXd(), Eigen::VectorXd()), InputError);
}

TEST(Mae, Examples) {
  EXPECT_EQ(mae(vec({4, 5}), vec({4, 5})), 0.0);
  EXPECT_DOUBLE_EQ(mae(vec({1, 2}), vec({2, 4})), 1.5);
}

TEST(R2, Examples) {
  EXPECT_EQ(r2(vec({1, 2, 3}), vec({1, 2, 3})), 1.0);
  EXPECT_EQ(r2(vec({1, 2, 3}), vec({2, 2, 2})), 0.0);
  EXPECT_DOUBLE_EQ(*r2(vec({1, 2, 3}), vec({3, 2, 1})), -3.0);
  EXPECT_FALSE(r2(vec({5, 5, 5}), vec({1, 2, 3})).has_value());
}

TEST(PrecisionRecall, Examples) {
  const auto pr = precision_recall(vec({100, 100, 600, 700, 100}), vec({100, 100, 100, 700, 900}), 500);
  EXPECT_EQ(pr.precision, 0.5);
  EXPECT_EQ(pr.recall, 0.5);
  EXPECT_EQ(pr.true_positives, 1u);

  const auto same = precision_recall(vec({600, 1, 800}), vec({600, 1, 800}), 500);
  EXPECT_EQ(same.precision, 1.0);
  EXPECT_EQ(same.recall, 1.0);

  const auto boundary = precision_recall(vec({500}), vec({500}), 500);
  EXPECT_FALSE(boundary.precision.has_value());
  EXPECT_FALSE(boundary.recall.has_value());

  const auto no_predicted = precision_recall(vec({600, 1}), vec({1, 1}), 500);
  EXPECT_FALSE(no_predicted.precision.has_value());
  EXPECT_EQ(no_predicted.recall, 0.0);
}

TEST(Summary, Examples) {
  const std::vector<double> five{5, 3, 1, 4, 2};
  const auto s = summary(five);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.q25, 2.0);
  EXPECT_EQ(s.median, 3.0);
  EXPECT_EQ(s.mean, 3.0);
  EXPECT_EQ(s.q75, 4.0);
  EXPECT_EQ(s.max, 5.0);

  const std::vector<double> one{7};
  const auto o = summary(one);
  for (double v : {o.min, o.q25, o.median, o.mean, o.q75, o.max}) EXPECT_EQ(v, 7.0);
  EXPECT_THROW(summary(std::vector<double>{}), InputError);
}

TEST(CriticalCount, Examples) {
  const std::vector<double> v{100, 600, 501, 500};
  const auto c = critical_count(v, 500);
  EXPECT_EQ(c.count, 2u);
  EXPECT_EQ(c.percentage, 50.0);
  EXPECT_EQ(format_percentage(c.percentage), "50.000%");

  const std::vector<double> calm{1, 2, 3};
  EXPECT_EQ(critical_count(calm, 500).count, 0u);
  EXPECT_EQ(format_percentage(critical_count(calm, 500).percentage), "0.000%");

  std::vector<double> many(125000, 10.0);
  for (int i = 0; i < 5; ++i) many[static_cast<std::size_t>(i)] = 900.0;
  EXPECT_EQ(format_percentage(critical_count(many, 500).percentage), "0.004%");
  EXPECT_THROW(critical_count(std::vector<double>{}, 500), InputError);
}

TEST(MetricsProperties, RandomVectors) {
  Rng rng(31);
  std::lognormal_distribution<double> d(4.0, 0.8);
  std::uniform_int_distribution<int> len(1, 400);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = len(rng);
    Eigen::VectorXd a(n), p(n);
    for (int i = 0; i < n; ++i) {
      a(i) = d(rng);
      p(i) = d(rng);
    }
    EXPECT_GE(rmse(a, p), mae(a, p) - 1e-12);
    if (const auto r = r2(a, p)) EXPECT_LE(*r, 1.0);

    std::vector<double> values(a.data(), a.data() + n);
    const auto s = summary(values);
    EXPECT_LE(s.min, s.q25);
    EXPECT_LE(s.q25, s.median);
    EXPECT_LE(s.median, s.q75);
    EXPECT_LE(s.q75, s.max);
    EXPECT_LE(s.min, s.mean);
    EXPECT_LE(s.mean, s.max);

    std::size_t last = values.size();
    for (double t = 0.0; t < 400.0; t += 25.0) {
      const auto c = critical_count(values, t).count;
      EXPECT_LE(c, last);
      last = c;
    }
  }
  EXPECT_EQ(rmse(vec({1, 2, 3, 4}), vec({4, 5, 6, 7})), mae(vec({1, 2, 3, 4}), vec({4, 5, 6, 7})));
  EXPECT_EQ(r2(vec({1, 2, 3, 4}), vec({1, 2, 3, 4})), 1.0);
  EXPECT_LT(*r2(vec({1, 2, 3, 4}), vec({1, 2, 3, 4.001})), 1.0);
}

TEST(MetricsOracle, MatchesNaiveLoops) {
  Rng rng(77);
  std::uniform_int_distribution<int> len(1, 5000);
  std::normal_distribution<double> g(200.0, 150.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = len(rng);
    Eigen::VectorXd a(n), p(n);
    for (int i = 0; i < n; ++i) {
      a(i) = g(rng);
      p(i) = a(i) + 0.5 * g(rng);
    }
    const std::vector<double> av(a.data(), a.data() + n), pv(p.data(), p.data() + n);
    EXPECT_TRUE(oracle::close_rel(rmse(a, p), oracle::rmse(av, pv), 1e-9));
    EXPECT_TRUE(oracle::close_rel(mae(a, p), oracle::mae(av, pv), 1e-9));
    const auto r = r2(a, p);
    const auto ro = oracle::r2(av, pv);
    ASSERT_EQ(r.has_value(), ro.has_value());
    if (r) EXPECT_TRUE(oracle::close_rel(*r, *ro, 1e-9));
    const auto pr = precision_recall(a, p, 500.0);
    const auto pro = oracle::precision_recall(av, pv, 500.0);
    EXPECT_EQ(pr.precision, pro.precision);
    EXPECT_EQ(pr.recall, pro.recall);
    const auto s = summary(av);
    EXPECT_TRUE(oracle::close_rel(s.q25, oracle::quantile(av, 0.25), 1e-9));
    EXPECT_TRUE(oracle::close_rel(s.median, oracle::quantile(av, 0.5), 1e-9));
    EXPECT_TRUE(oracle::close_rel(s.q75, oracle::quantile(av, 0.75), 1e-9));
    EXPECT_TRUE(oracle::close_rel(s.mean, oracle::mean(av), 1e-9));
  }
}
