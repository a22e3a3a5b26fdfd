#include "raildelay/pipeline/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "raildelay/core/csv.hpp"
#include "raildelay/core/error.hpp"
#include "raildelay/core/split.hpp"
#include "raildelay/ml/model_io.hpp"
#include "raildelay/pipeline/manifest.hpp"
#include "raildelay/pipeline/reports.hpp"
#include "raildelay/pipeline/stages.hpp"
#include "raildelay/sim/scenario.hpp"
#include "raildelay/sim/simulate.hpp"

namespace raildelay::pipeline {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw InputError("cannot create directory " + dir.string());
}

fs::path manifest_for(const fs::path& file) { return fs::path(file.string() + ".manifest.json"); }

DelayKind require_kind(const std::string& text) {
  const auto kind = parse_delay_kind(text);
  if (!kind) throw InputError("unknown delay kind '" + text + "'");
  return *kind;
}

std::vector<ml::TrainedModel> load_models(const std::vector<std::string>& paths) {
  std::vector<ml::TrainedModel> models;
  for (const auto& p : paths) models.push_back(ml::load_model_file(p));
  return models;
}

RunManifest start_manifest(const std::string& command, const std::string& options, std::uint64_t seed) {
  RunManifest m;
  m.command = command;
  m.config_digest = digest_text(options);
  m.seed = seed;
  m.started_utc = utc_now();
  return m;
}

void finish_manifest(RunManifest& m, const fs::path& path) {
  m.finished_utc = utc_now();
  write_manifest(path, m);
}

struct SimulateOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool print_schema = false;
  bool print_default = false;
};

void run_simulate(const SimulateOptions& o, std::ostream& out) {
  if (o.print_schema) {
    out << sim::scenario_schema();
    return;
  }
  if (o.print_default) {
    out << sim::to_config_text(sim::default_scenario());
    return;
  }
  if (o.out.empty()) throw InputError("simulate needs --out");
  sim::ScenarioConfig config = o.config.empty() ? sim::default_scenario() : sim::load_scenario(o.config);
  config.seed = resolve_seed(o.seed, config.seed);
  config.validate();

  const fs::path dir(o.out);
  ensure_dir(dir);
  auto manifest = start_manifest("simulate", sim::to_config_text(config), config.seed);
  if (!o.config.empty()) manifest.inputs.push_back(o.config);

  const sim::Campaign campaign = sim::simulate(config);
  write_csv_file(dir / "bq.csv", campaign.bq);
  write_csv_file(dir / "pr.csv", campaign.pr);
  manifest.outputs = {(dir / "bq.csv").string(), (dir / "pr.csv").string()};
  manifest.details = {{"records", campaign.pr.size()},
                      {"handovers", campaign.handovers}};
  finish_manifest(manifest, dir / "manifest.json");
  out << "simulated " << campaign.pr.size() << " s; handovers " << campaign.handovers[0] << '/'
      << campaign.handovers[1] << '/' << campaign.handovers[2] << "; wrote " << dir.string() << '\n';
}

struct TrainOptions {
  std::string data;
  std::string delay;
  std::vector<std::string> presets;
  bool all = false;
  std::string out;
  double train_fraction = kDefaultTrainFraction;
  std::optional<std::uint64_t> seed;
};

void run_train(const TrainOptions& o, std::ostream& out) {
  std::vector<ml::ModelPreset> presets;
  if (o.all) presets.assign(ml::kAllPresets.begin(), ml::kAllPresets.end());
  for (const auto& p : o.presets) {
    const auto preset = ml::parse_preset(p);
    if (!preset) throw InputError("unknown model preset '" + p + "'");
    presets.push_back(*preset);
  }
  if (presets.empty()) throw InputError("train needs --model or --all");

  std::vector<DelayKind> kinds;
  if (o.delay == "all") kinds.assign(kAllDelayKinds.begin(), kAllDelayKinds.end());
  else kinds.push_back(require_kind(o.delay));

  const std::uint64_t seed = resolve_seed(o.seed, kDefaultTrainSeed);
  const Dataset pr = read_csv_file(o.data);
  const fs::path dir(o.out);
  ensure_dir(dir);

  std::ostringstream options;
  options << "delay=" << o.delay << ";fraction=" << o.train_fraction << ";presets=";
  for (const auto p : presets) options << ml::preset_token(p) << ' ';
  auto manifest = start_manifest("train", options.str(), seed);
  manifest.inputs.push_back(o.data);

  for (const auto kind : kinds) {
    for (const auto& model : train_models(pr, kind, presets, o.train_fraction, seed)) {
      const fs::path path = dir / model_filename(model);
      ml::save_model_file(path, model);
      manifest.outputs.push_back(path.string());
      out << "trained " << model.label() << " for " << display_name(kind) << " on "
          << model.metadata.rows << " rows -> " << path.string() << '\n';
    }
  }
  manifest.details = {{"train_fraction", o.train_fraction}};
  finish_manifest(manifest, dir / "manifest.json");
}

struct EvaluateOptions {
  std::vector<std::string> models;
  std::string data;
  std::string out;
  std::string scope = "holdout";
  double train_fraction = kDefaultTrainFraction;
};

void run_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const auto scope = parse_scope(o.scope);
  if (!scope) throw InputError("scope must be full or holdout");
  const auto models = load_models(o.models);
  const Dataset data = read_csv_file(o.data);
  const MetricsTable table = evaluate_models(models, data, *scope, o.train_fraction);
  const std::string csv = metrics_table_csv(table);
  write_text(o.out, csv);

  std::ostringstream options;
  options << "scope=" << o.scope << ";fraction=" << o.train_fraction;
  auto manifest = start_manifest("evaluate", options.str(), 0);
  manifest.inputs = o.models;
  manifest.inputs.push_back(o.data);
  manifest.outputs = {o.out};
  manifest.details = {{"scope", table.scope}, {"train_fraction", o.train_fraction}};
  finish_manifest(manifest, manifest_for(o.out));
  out << "scope: " << table.scope << '\n' << csv;
}

void run_select(const std::string& data, const std::string& out_path, std::ostream& out) {
  const auto selection = select_best(parse_metrics_table(read_text(data)));
  const std::string csv = selection_csv(selection);
  write_text(out_path, csv);
  auto manifest = start_manifest("select", "", 0);
  manifest.inputs = {data};
  manifest.outputs = {out_path};
  finish_manifest(manifest, manifest_for(out_path));
  out << csv;
}

struct GenerateOptions {
  std::string data;
  std::string out;
  std::vector<std::string> models;
  std::string selection;
  std::string model_dir;
};

void run_generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> paths = o.models;
  if (!o.selection.empty()) {
    if (o.model_dir.empty()) throw InputError("--selection needs --model-dir");
    for (const auto& s : parse_selection_csv(read_text(o.selection))) {
      const auto preset = ml::parse_preset(s.model);
      const std::string stem = preset ? std::string(ml::preset_token(*preset)) : "custom";
      const fs::path path = fs::path(o.model_dir) / (std::string(token(s.kind)) + "__" + stem + ".rdm");
      if (!fs::exists(path)) {
        err << "warning: selected model " << path.string() << " not found\n";
        continue;
      }
      paths.push_back(path.string());
    }
  }
  if (paths.empty()) throw InputError("generate needs --models or --selection with --model-dir");

  const auto models = load_models(paths);
  const Dataset source = read_csv_file(o.data);
  const GeneratedDataset generated = generate_pr(source, models);
  for (const auto& w : generated.warnings) err << "warning: " << w << '\n';
  write_csv_file(o.out, generated.dataset);

  auto manifest = start_manifest("generate", o.selection, 0);
  manifest.inputs = paths;
  manifest.inputs.push_back(o.data);
  manifest.outputs = {o.out};
  manifest.details = {{"warnings", generated.warnings}};
  finish_manifest(manifest, manifest_for(o.out));
  out << "generated " << generated.dataset.size() << " GEN_PR records -> " << o.out << '\n';
}

struct ReportOptions {
  std::vector<std::string> data;
  std::string kind;
  std::string out;
  double boundary_lon = kDefaultBoundaryLon;
  double tail_fraction = 1.0;
};

void run_report(const ReportOptions& o, std::ostream& out) {
  if (!(o.tail_fraction > 0.0 && o.tail_fraction <= 1.0))
    throw InputError("tail fraction must be in (0, 1]");
  std::vector<Dataset> datasets;
  for (const auto& p : o.data) {
    Dataset d = read_csv_file(p);
    if (o.tail_fraction < 1.0) d = time_split(d, 1.0 - o.tail_fraction).test;
    datasets.push_back(std::move(d));
  }

  std::string csv;
  if (o.kind == "reliability") {
    csv = reliability_csv(reliability_report(datasets));
  } else if (o.kind == "regional") {
    csv = stats_csv(regional_report(datasets, o.boundary_lon), true);
  } else if (o.kind == "summary") {
    csv = stats_csv(summary_report(datasets), false);
  } else {
    throw InputError("report kind must be reliability, regional or summary");
  }

  std::ostringstream options;
  options << "kind=" << o.kind << ";boundary=" << o.boundary_lon << ";tail=" << o.tail_fraction;
  if (o.tail_fraction < 1.0)
    out << "note: statistics cover the last " << o.tail_fraction * 100.0 << "% of each dataset\n";
  if (o.out.empty()) {
    out << csv;
    return;
  }
  write_text(o.out, csv);
  auto manifest = start_manifest("report", options.str(), 0);
  manifest.inputs = o.data;
  manifest.outputs = {o.out};
  manifest.details = {{"kind", o.kind}, {"tail_fraction", o.tail_fraction}};
  if (o.kind == "regional") manifest.details["boundary_lon"] = o.boundary_lon;
  finish_manifest(manifest, manifest_for(o.out));
  out << csv;
}

void run_export(const std::string& data, const std::string& delay, const std::string& out_path,
                std::ostream& out) {
  const DelayKind kind = require_kind(delay);
  const auto geo = export_geojson(read_csv_file(data), kind);
  write_text(out_path, geo.dump() + "\n");
  out << "exported " << geo["features"].size() << " points -> " << out_path << '\n';
}

} // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RAILDELAY_SEED"); env && *env) {
    const std::string_view text(env);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw InputError("RAILDELAY_SEED must be an unsigned integer, got '" + std::string(text) + "'");
    return value;
  }
  return fallback;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Railway cellular delay toolkit"};
  app.set_version_flag("--version", std::string(RAILDELAY_VERSION));
  app.require_subcommand(1);

  SimulateOptions sim_o;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a BQ/PR measurement campaign");
  sim_cmd->add_option("--config", sim_o.config, "Scenario file (default: built-in scenario)")
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--out", sim_o.out, "Output directory for bq.csv, pr.csv, manifest.json");
  sim_cmd->add_option("--seed", sim_o.seed, "Overrides RAILDELAY_SEED and the config seed");
  sim_cmd->add_flag("--print-schema", sim_o.print_schema, "Print the scenario file reference");
  sim_cmd->add_flag("--print-default-config", sim_o.print_default, "Print the built-in scenario");

  TrainOptions train_o;
  auto* train_cmd = app.add_subcommand("train", "Train models on PR data");
  train_cmd->add_option("--data", train_o.data, "PR measurement CSV")->required();
  train_cmd->add_option("--delay", train_o.delay, "Delay kind or 'all'")->required();
  train_cmd->add_option("--model", train_o.presets, "Preset: forest, boost-level, boost-leaf, boost-depth6");
  train_cmd->add_flag("--all", train_o.all, "Train every preset");
  train_cmd->add_option("--out", train_o.out, "Model directory")->required();
  train_cmd->add_option("--train-fraction", train_o.train_fraction,
                        "Leading share of records used for training; 1 uses all")
      ->capture_default_str();
  train_cmd->add_option("--seed", train_o.seed, "Overrides RAILDELAY_SEED (default 42)");

  EvaluateOptions eval_o;
  auto* eval_cmd = app.add_subcommand("evaluate", "Write the metrics table for trained models");
  eval_cmd->add_option("--models", eval_o.models, "Model files")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", eval_o.data, "Measurement CSV")->required();
  eval_cmd->add_option("--out", eval_o.out, "Metrics CSV")->required();
  eval_cmd->add_option("--scope", eval_o.scope, "full or holdout")->capture_default_str();
  eval_cmd->add_option("--train-fraction", eval_o.train_fraction, "Split used for the holdout scope")
      ->capture_default_str();

  std::string select_data, select_out;
  auto* select_cmd = app.add_subcommand("select", "Pick the lowest-RMSE model per delay kind");
  select_cmd->add_option("--data", select_data, "Metrics CSV")->required();
  select_cmd->add_option("--out", select_out, "Selection CSV")->required();

  GenerateOptions gen_o;
  auto* gen_cmd = app.add_subcommand("generate", "Predict PR delays for a BQ dataset");
  gen_cmd->add_option("--data", gen_o.data, "BQ measurement CSV")->required();
  gen_cmd->add_option("--out", gen_o.out, "GEN_PR CSV")->required();
  gen_cmd->add_option("--models", gen_o.models, "Model files, at most one per delay kind");
  gen_cmd->add_option("--selection", gen_o.selection, "Selection CSV");
  gen_cmd->add_option("--model-dir", gen_o.model_dir, "Directory holding the selected models");

  ReportOptions report_o;
  auto* report_cmd = app.add_subcommand("report", "Reliability, regional or summary tables");
  report_cmd->add_option("--data", report_o.data, "Measurement CSVs")->required();
  report_cmd->add_option("--kind", report_o.kind, "reliability, regional or summary")->required();
  report_cmd->add_option("--out", report_o.out, "Output CSV (default: stdout only)");
  report_cmd->add_option("--boundary-lon", report_o.boundary_lon, "East/West boundary")
      ->capture_default_str();
  report_cmd->add_option("--tail-fraction", report_o.tail_fraction,
                         "Use only the chronologically last share of each dataset")
      ->capture_default_str();

  std::string geo_data, geo_delay, geo_out;
  auto* geo_cmd = app.add_subcommand("export-geo", "Write delay points as GeoJSON");
  geo_cmd->add_option("--data", geo_data, "Measurement CSV")->required();
  geo_cmd->add_option("--delay", geo_delay, "Delay kind")->required();
  geo_cmd->add_option("--out", geo_out, "GeoJSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*sim_cmd) run_simulate(sim_o, out);
    else if (*train_cmd) run_train(train_o, out);
    else if (*eval_cmd) run_evaluate(eval_o, out);
    else if (*select_cmd) run_select(select_data, select_out, out);
    else if (*gen_cmd) run_generate(gen_o, out, err);
    else if (*report_cmd) run_report(report_o, out);
    else if (*geo_cmd) run_export(geo_data, geo_delay, geo_out, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitOk;
}

} // namespace raildelay::pipeline
