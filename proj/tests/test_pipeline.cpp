#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "raildelay/core/error.hpp"
#include "raildelay/core/features.hpp"
#include "raildelay/pipeline/manifest.hpp"
#include "raildelay/pipeline/reports.hpp"
#include "raildelay/pipeline/stages.hpp"
#include "raildelay/sim/simulate.hpp"

using namespace raildelay;
using namespace raildelay::pipeline;
using testing_support::make_record;

namespace {

const sim::Campaign& small_campaign() {
  static const sim::Campaign c = sim::simulate(testing_support::short_scenario(1500, 12));
  return c;
}

/// A one-tree, no-bootstrap, unbounded forest: memorises its training rows.
ml::TrainedModel memorising_model(const Dataset& data, DelayKind kind) {
  const auto fs = to_features(data, kind);
  ml::ForestConfig cfg;
  cfg.n_trees = 1;
  cfg.bootstrap = false;
  auto m = ml::fit_forest(fs.features, fs.targets, cfg);
  m.metadata.delay_kind = kind;
  return m;
}

ml::TrainedModel constant_model(DelayKind kind, double value) {
  ml::TrainedModel m;
  m.trees = {ml::RegressionTree({ml::TreeNode{-1, 0, 0, 0, value}})};
  m.columns = feature_names();
  m.metadata.delay_kind = kind;
  return m;
}

MetricsTable rmse_table(DelayKind kind, std::initializer_list<double> values) {
  MetricsTable t;
  std::size_t i = 0;
  for (double v : values) {
    metrics::MetricsReport r;
    r.rmse = v;
    t.set(kind, std::string(ml::preset_name(ml::kAllPresets[i++])), r);
  }
  return t;
}

} // namespace

TEST(Train, AllPresetsOnPrData) {
  const auto models = train_models(small_campaign().pr, DelayKind::Tcp, ml::kAllPresets, 0.7, 3);
  ASSERT_EQ(models.size(), 4u);
  std::set<std::string> names;
  for (const auto& m : models) {
    EXPECT_EQ(m.metadata.delay_kind, DelayKind::Tcp);
    EXPECT_EQ(m.metadata.rows, 1050u);
    EXPECT_EQ(m.metadata.seed, 3u);
    names.insert(model_filename(m));
  }
  EXPECT_EQ(names.size(), 4u);
  EXPECT_TRUE(names.count("tcp__forest.rdm"));
}

TEST(Train, RefusesNonPrData) {
  try {
    train_models(small_campaign().bq, DelayKind::Tcp, ml::kAllPresets, 0.7, 3);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "training is constrained to PR-mode data");
  }
  Dataset tiny(Mode::PacketReplication);
  tiny.push_back(make_record(1, Mode::PacketReplication));
  EXPECT_THROW(train_models(tiny, DelayKind::Tcp, ml::kAllPresets, 0.7, 3), InputError);
}

TEST(Evaluate, MemorisedTrainingDataIsPerfect) {
  const auto& pr = small_campaign().pr;
  const std::vector<ml::TrainedModel> models{memorising_model(pr, DelayKind::Dns)};
  const auto table = evaluate_models(models, pr, EvalScope::Full, 0.7);
  const auto* r = table.find(DelayKind::Dns, "CustomForest");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->rmse, 0.0);
  EXPECT_EQ(r->r2, 1.0);
  EXPECT_EQ(table.scope, "full");
}

TEST(Evaluate, LayoutAndThresholds) {
  const auto& pr = small_campaign().pr;
  std::vector<ml::TrainedModel> models;
  for (const auto kind : {DelayKind::Http, DelayKind::Tcp})
    for (auto& m : train_models(pr, kind, ml::kAllPresets, 0.7, 1)) models.push_back(std::move(m));
  const auto table = evaluate_models(models, pr, EvalScope::Holdout, 0.7);
  EXPECT_EQ(table.scope, "holdout");
  EXPECT_EQ(table.kinds, (std::vector<DelayKind>{DelayKind::Tcp, DelayKind::Http}));
  EXPECT_EQ(table.models, (std::vector<std::string>{"Forest100", "BoostLevel100", "BoostLeaf100", "BoostDepth6LR01"}));
  EXPECT_EQ(table.find(DelayKind::Http, "Forest100")->threshold_ms, 1000.0);
  EXPECT_EQ(table.find(DelayKind::Tcp, "Forest100")->threshold_ms, 500.0);

  const std::string csv = metrics_table_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "Delay,Metric,Forest100,BoostLevel100,BoostLeaf100,BoostDepth6LR01");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 5);
  for (const char* metric : {",RMSE,", ",R2,", ",MAE,", ",Precision,", ",Recall,"})
    EXPECT_NE(csv.find(std::string("TCP") + metric), std::string::npos) << metric;

  const auto back = parse_metrics_table(csv);
  EXPECT_EQ(back.models, table.models);
  EXPECT_EQ(back.kinds, table.kinds);
  EXPECT_NEAR(back.find(DelayKind::Tcp, "BoostLeaf100")->rmse, table.find(DelayKind::Tcp, "BoostLeaf100")->rmse, 1e-4);
}

TEST(Select, PublishedRmseRows) {
  EXPECT_EQ(select_best(rmse_table(DelayKind::PositionReport, {8.18, 9.51, 15.54, 10.97}))[0].model, "Forest100");
  EXPECT_EQ(select_best(rmse_table(DelayKind::MovementAuthority, {30.78, 8.73, 40.13, 17.81}))[0].model,
            "BoostLevel100");
  EXPECT_EQ(select_best(rmse_table(DelayKind::Tcp, {8.23, 10.45, 10.85, 11.01}))[0].model, "Forest100");
  EXPECT_EQ(select_best(rmse_table(DelayKind::Dns, {5.0, 5.0, 5.0, 5.0}))[0].model, "Forest100");
  EXPECT_EQ(select_best(rmse_table(DelayKind::Dns, {6.0, 5.0, 5.0, 5.0}))[0].model, "BoostLevel100");
}

TEST(Select, MissingCellsAndCsvForms) {
  const std::string csv =
      "Delay,Metric,Forest100,BoostLevel100\n"
      "MA,RMSE,30.78,8.73\n"
      "MA,Precision,NA,0.5\n"
      "DNS,RMSE,29.09,\n";
  const auto table = parse_metrics_table(csv);
  EXPECT_FALSE(table.find(DelayKind::MovementAuthority, "Forest100")->precision.has_value());
  EXPECT_EQ(table.find(DelayKind::MovementAuthority, "BoostLevel100")->precision, 0.5);
  EXPECT_THROW(select_best(table), InputError);

  const auto ok = parse_metrics_table("Delay,Metric,Forest100,BoostLevel100\nMA,RMSE,30.78,8.73\n");
  const auto sel = select_best(ok);
  const auto back = parse_selection_csv(selection_csv(sel));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].model, "BoostLevel100");
  EXPECT_EQ(back[0].kind, DelayKind::MovementAuthority);

  EXPECT_THROW(parse_metrics_table("Delay,Metric\n"), InputError);
  EXPECT_THROW(parse_metrics_table("Delay,Metric,A\nMA,RMSE,1,2\n"), InputError);
  EXPECT_THROW(parse_metrics_table("Delay,Metric,A\nMA,F1,1\n"), InputError);
  EXPECT_THROW(parse_metrics_table("Delay,Metric,A\nMA,RMSE,x\n"), InputError);
  EXPECT_THROW(parse_metrics_table("Delay,Metric,A\nMA,RMSE,NA\n"), InputError);
}

TEST(Generate, ConstantModelAndFieldPreservation) {
  const auto& bq = small_campaign().bq;
  std::vector<ml::TrainedModel> models;
  for (const auto kind : kAllDelayKinds) models.push_back(constant_model(kind, 33.5));
  const auto gen = generate_pr(bq, models);
  EXPECT_TRUE(gen.warnings.empty());
  ASSERT_EQ(gen.dataset.size(), bq.size());
  EXPECT_EQ(gen.dataset.mode(), Mode::GeneratedPR);
  for (std::size_t i = 0; i < bq.size(); ++i) {
    const auto& g = gen.dataset[i];
    const auto& s = bq[i];
    ASSERT_EQ(g.timestamp_s, s.timestamp_s);
    ASSERT_EQ(g.lat, s.lat);
    ASSERT_EQ(g.lon, s.lon);
    ASSERT_EQ(g.chainage_km, s.chainage_km);
    ASSERT_EQ(g.speed_kmh, s.speed_kmh);
    ASSERT_EQ(g.kpis, s.kpis);
    for (const auto kind : kAllDelayKinds) {
      if (is_sampled_at(kind, g.timestamp_s)) {
        ASSERT_EQ(g.delay(kind), 33.5);
      } else {
        ASSERT_FALSE(g.delay(kind));
      }
    }
  }
}

TEST(Generate, MissingModelWarnsAndClampsPredictions) {
  const auto& bq = small_campaign().bq;
  const std::vector<ml::TrainedModel> models{constant_model(DelayKind::Tcp, -4.0)};
  const auto gen = generate_pr(bq, models);
  EXPECT_EQ(gen.warnings.size(), 4u);
  EXPECT_EQ(gen.dataset.count(DelayKind::Dns), 0u);
  EXPECT_EQ(gen.dataset.count(DelayKind::Tcp), bq.size());
  EXPECT_EQ(*gen.dataset[0].delay(DelayKind::Tcp), 0.01);

  const std::vector<ml::TrainedModel> twice{constant_model(DelayKind::Tcp, 1), constant_model(DelayKind::Tcp, 2)};
  EXPECT_THROW(generate_pr(bq, twice), InputError);
  EXPECT_THROW(generate_pr(gen.dataset, models), InputError);
}

TEST(Reports, ReliabilityRecomputesFromCounts) {
  const std::vector<Dataset> data{small_campaign().bq, small_campaign().pr};
  const auto rows = reliability_report(data);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    const Dataset& d = r.mode == Mode::BestQuality ? data[0] : data[1];
    EXPECT_EQ(r.critical.total, d.count(r.kind));
    EXPECT_DOUBLE_EQ(r.critical.percentage,
                     100.0 * static_cast<double>(r.critical.count) / static_cast<double>(r.critical.total));
  }
  const std::string csv = reliability_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "Delay,Measurement Mode,Count,Percentage");
  EXPECT_NE(csv.find("Position Report,Best Quality,"), std::string::npos);
  EXPECT_NE(csv.find("HTTP,Measured PR Mode,"), std::string::npos);
}

TEST(Reports, RegionalAndSummaryLayouts) {
  const std::vector<Dataset> data{small_campaign().pr};
  const auto regional = regional_report(data, 25.5);
  ASSERT_FALSE(regional.empty());
  for (const auto& r : regional) EXPECT_TRUE(r.region == "East" || r.region == "West");
  const std::string csv = stats_csv(regional, true);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "Delay,Measurement Mode,Region,Mean,Min,25%,50%,75%,Max");

  Dataset one(Mode::GeneratedPR);
  auto r = make_record(0, Mode::GeneratedPR);
  one.push_back(r);
  const std::vector<Dataset> single{one};
  const auto rows = summary_report(single);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) {
    const auto& s = row.stats;
    for (double v : {s.min, s.q25, s.median, s.mean, s.q75, s.max}) EXPECT_EQ(v, 40.0);
  }
  EXPECT_EQ(stats_csv(rows, false).substr(0, 51), "Delay,Measurement Mode,Mean,Min,25%,50%,75%,Max\nPos");

  const std::vector<Dataset> empty{Dataset(Mode::BestQuality)};
  EXPECT_THROW(summary_report(empty), InputError);
  EXPECT_THROW(reliability_report(std::span<const Dataset>{}), InputError);
}

TEST(GeoJson, PointsAndCriticalFlag) {
  Dataset d(Mode::BestQuality);
  for (int t = 0; t < 12; ++t) {
    auto r = make_record(t, Mode::BestQuality, 24.0 + 0.1 * t);
    r.set_delay(DelayKind::PositionReport, t == 5 ? 600.0 : 20.0 + t);
    d.push_back(r);
  }
  const auto geo = export_geojson(d, DelayKind::PositionReport);
  EXPECT_EQ(geo["type"], "FeatureCollection");
  ASSERT_EQ(geo["features"].size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) {
    const auto& f = geo["features"][i];
    EXPECT_EQ(f["type"], "Feature");
    EXPECT_EQ(f["geometry"]["type"], "Point");
    ASSERT_EQ(f["geometry"]["coordinates"].size(), 2u);
    EXPECT_EQ(f["geometry"]["coordinates"][0].get<double>(), d[i].lon);
    EXPECT_EQ(f["geometry"]["coordinates"][1].get<double>(), d[i].lat);
    const auto& p = f["properties"];
    EXPECT_EQ(p["mode"], "BQ");
    EXPECT_EQ(p["delay_kind"], "position");
    EXPECT_EQ(p["timestamp_s"], d[i].timestamp_s);
    if (i == 5) {
      EXPECT_TRUE(p["critical"].get<bool>());
      EXPECT_TRUE(p["bucket"].is_null());
    } else {
      EXPECT_FALSE(p["critical"].get<bool>());
      const int b = p["bucket"].get<int>();
      EXPECT_GE(b, 0);
      EXPECT_LE(b, 4);
    }
  }
  EXPECT_EQ(geo["features"][0]["properties"]["bucket"], 0);
  EXPECT_EQ(geo["features"][11]["properties"]["bucket"], 4);
  EXPECT_EQ(export_geojson(d, DelayKind::MovementAuthority)["features"].size(), 2u);

  Dataset no_http(Mode::BestQuality);
  auto r = make_record(1, Mode::BestQuality);
  r.set_delay(DelayKind::Http, std::nullopt);
  no_http.push_back(r);
  EXPECT_THROW(export_geojson(no_http, DelayKind::Http), InputError);
}

TEST(Manifest, DigestIsStable) {
  EXPECT_EQ(digest_text("abc"), digest_text("abc"));
  EXPECT_NE(digest_text("abc"), digest_text("abd"));
  EXPECT_EQ(digest_text(""), "fnv1a64:cbf29ce484222325");
  RunManifest m;
  m.command = "simulate";
  m.seed = 7;
  const auto j = to_json(m);
  for (const char* key : {"command", "config_digest", "seed", "inputs", "outputs", "tool_version",
                          "started_utc", "finished_utc"})
    EXPECT_TRUE(j.contains(key)) << key;
}
