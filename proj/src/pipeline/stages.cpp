#include "raildelay/pipeline/stages.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "raildelay/core/error.hpp"
#include "raildelay/core/features.hpp"
#include "raildelay/core/split.hpp"

namespace raildelay::pipeline {

namespace {

Dataset training_slice(const Dataset& data, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw InputError("train fraction must be in (0, 1]");
  if (train_fraction == 1.0) return data;
  return time_split(data, train_fraction).train;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value))
    throw InputError("line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  return value;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string optional_cell(const std::optional<double>& value) {
  return value ? fixed(*value, 4) : std::string("NA");
}

DelayKind parse_kind_field(std::string_view field, std::size_t line_no) {
  const auto kind = parse_delay_kind(field);
  if (!kind)
    throw InputError("line " + std::to_string(line_no) + ": unknown delay '" + std::string(field) + "'");
  return *kind;
}

constexpr std::array<std::string_view, 5> kMetricRows{"RMSE", "R2", "MAE", "Precision", "Recall"};

} // namespace

std::vector<ml::TrainedModel> train_models(const Dataset& pr, DelayKind kind,
                                           std::span<const ml::ModelPreset> presets,
                                           double train_fraction, std::uint64_t seed) {
  if (pr.mode() != Mode::PacketReplication)
    throw InputError("training is constrained to PR-mode data");
  if (presets.empty()) throw InputError("no model presets requested");
  const Dataset train = training_slice(pr, train_fraction);
  const FeatureSet fs = to_features(train, kind);
  std::vector<ml::TrainedModel> models;
  models.reserve(presets.size());
  for (const auto preset : presets) {
    auto model = ml::fit_preset(preset, fs.features, fs.targets, seed);
    model.metadata.delay_kind = kind;
    models.push_back(std::move(model));
  }
  return models;
}

std::string model_filename(const ml::TrainedModel& model) {
  const std::string kind =
      model.metadata.delay_kind ? std::string(token(*model.metadata.delay_kind)) : "any";
  const std::string preset = model.preset ? std::string(ml::preset_token(*model.preset)) : "custom";
  return kind + "__" + preset + ".rdm";
}

std::string_view scope_name(EvalScope scope) {
  return scope == EvalScope::Full ? "full" : "holdout";
}

std::optional<EvalScope> parse_scope(std::string_view text) {
  if (text == "full") return EvalScope::Full;
  if (text == "holdout") return EvalScope::Holdout;
  return std::nullopt;
}

const metrics::MetricsReport* MetricsTable::find(DelayKind kind, const std::string& model) const {
  const auto it = cells.find({kind, model});
  return it == cells.end() ? nullptr : &it->second;
}

void MetricsTable::set(DelayKind kind, const std::string& model, const metrics::MetricsReport& report) {
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
  if (std::find(models.begin(), models.end(), model) == models.end()) models.push_back(model);
  cells[{kind, model}] = report;
}

MetricsTable evaluate_models(std::span<const ml::TrainedModel> models, const Dataset& dataset,
                             EvalScope scope, double train_fraction) {
  if (models.empty()) throw InputError("no models to evaluate");
  Dataset data = dataset;
  if (scope == EvalScope::Holdout) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw InputError("holdout evaluation needs a train fraction in (0, 1)");
    data = time_split(dataset, train_fraction).test;
  }

  // Preset columns first, in declaration order, then custom models.
  std::vector<const ml::TrainedModel*> ordered;
  for (const auto& m : models) ordered.push_back(&m);
  const auto rank = [](const ml::TrainedModel* m) {
    return m->preset ? static_cast<int>(*m->preset) : static_cast<int>(ml::kAllPresets.size());
  };
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](auto* a, auto* b) { return rank(a) < rank(b); });

  MetricsTable table;
  table.scope = std::string(scope_name(scope));
  for (const auto* model : ordered) {
    if (!model->metadata.delay_kind)
      throw InputError("model " + model->label() + " does not record its delay kind");
    const DelayKind kind = *model->metadata.delay_kind;
    const std::string column = model->label();
    if (table.find(kind, column))
      throw InputError("two " + column + " models for " + std::string(display_name(kind)));
    const FeatureSet fs = to_features(data, kind);
    const Eigen::VectorXd predicted = model->predict(fs.features);
    table.set(kind, column, metrics::evaluate(fs.targets, predicted, critical_threshold_ms(kind)));
  }
  std::stable_sort(table.kinds.begin(), table.kinds.end(),
                   [](DelayKind a, DelayKind b) { return index_of(a) < index_of(b); });
  return table;
}

std::string metrics_table_csv(const MetricsTable& table) {
  std::ostringstream out;
  out << "Delay,Metric";
  for (const auto& m : table.models) out << ',' << m;
  out << '\n';
  for (const auto kind : table.kinds) {
    for (const auto metric : kMetricRows) {
      out << display_name(kind) << ',' << metric;
      for (const auto& m : table.models) {
        out << ',';
        const auto* r = table.find(kind, m);
        if (!r) continue;
        if (metric == "RMSE") out << fixed(r->rmse, 4);
        else if (metric == "R2") out << optional_cell(r->r2);
        else if (metric == "MAE") out << fixed(r->mae, 4);
        else if (metric == "Precision") out << optional_cell(r->precision);
        else out << optional_cell(r->recall);
      }
      out << '\n';
    }
  }
  return out.str();
}

MetricsTable parse_metrics_table(std::string_view csv) {
  const auto lines = split_lines(csv);
  if (lines.empty()) throw InputError("metrics table is empty");
  const auto header = split_fields(lines[0]);
  if (header.size() < 3 || header[0] != "Delay" || header[1] != "Metric")
    throw InputError("line 1: expected header Delay,Metric,<models...>");

  MetricsTable table;
  std::set<std::string> seen;
  for (std::size_t c = 2; c < header.size(); ++c) {
    std::string name(header[c]);
    if (name.empty() || !seen.insert(name).second)
      throw InputError("line 1: empty or duplicate model column '" + name + "'");
    table.models.push_back(std::move(name));
  }

  struct Partial {
    std::optional<double> rmse, mae;
    std::optional<double> r2, precision, recall;
  };
  std::map<std::pair<DelayKind, std::string>, Partial> partial;
  std::set<std::pair<DelayKind, std::string_view>> rows_seen;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size())
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields");
    const DelayKind kind = parse_kind_field(fields[0], line_no);
    const auto metric = std::find(kMetricRows.begin(), kMetricRows.end(), fields[1]);
    if (metric == kMetricRows.end())
      throw InputError("line " + std::to_string(line_no) + ": unknown metric '" +
                       std::string(fields[1]) + "'");
    if (!rows_seen.insert({kind, *metric}).second)
      throw InputError("line " + std::to_string(line_no) + ": duplicate row");
    if (std::find(table.kinds.begin(), table.kinds.end(), kind) == table.kinds.end())
      table.kinds.push_back(kind);

    for (std::size_t c = 2; c < fields.size(); ++c) {
      const auto field = fields[c];
      if (field.empty()) continue;
      auto& p = partial[{kind, table.models[c - 2]}];
      const bool undefined = field == "NA";
      if (undefined && (*metric == "RMSE" || *metric == "MAE"))
        throw InputError("line " + std::to_string(line_no) + ": " + std::string(*metric) +
                         " cannot be NA");
      const std::optional<double> value =
          undefined ? std::nullopt : std::optional<double>(parse_number(field, line_no));
      if (*metric == "RMSE") p.rmse = value;
      else if (*metric == "R2") p.r2 = value;
      else if (*metric == "MAE") p.mae = value;
      else if (*metric == "Precision") p.precision = value;
      else p.recall = value;
    }
  }

  for (const auto& [key, p] : partial) {
    if (!p.rmse) continue;
    metrics::MetricsReport r;
    r.rmse = *p.rmse;
    r.mae = p.mae.value_or(0.0);
    r.r2 = p.r2;
    r.precision = p.precision;
    r.recall = p.recall;
    r.threshold_ms = critical_threshold_ms(key.first);
    table.cells[key] = r;
  }
  return table;
}

std::vector<Selection> select_best(const MetricsTable& table) {
  if (table.kinds.empty() || table.models.empty()) throw InputError("metrics table has no cells");
  std::vector<Selection> out;
  for (const auto kind : table.kinds) {
    std::optional<Selection> best;
    for (const auto& model : table.models) {
      const auto* r = table.find(kind, model);
      if (!r)
        throw InputError("missing RMSE for " + std::string(display_name(kind)) + " / " + model);
      if (!best || r->rmse < best->rmse) best = Selection{kind, model, r->rmse};
    }
    out.push_back(*best);
  }
  return out;
}

std::string selection_csv(const std::vector<Selection>& selection) {
  std::ostringstream out;
  out << "Delay,Selected,RMSE\n";
  for (const auto& s : selection)
    out << display_name(s.kind) << ',' << s.model << ',' << fixed(s.rmse, 4) << '\n';
  return out.str();
}

std::vector<Selection> parse_selection_csv(std::string_view csv) {
  const auto lines = split_lines(csv);
  if (lines.empty() || lines[0] != "Delay,Selected,RMSE")
    throw InputError("line 1: expected header Delay,Selected,RMSE");
  std::vector<Selection> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 3) throw InputError("line " + std::to_string(i + 1) + ": expected 3 fields");
    const DelayKind kind = parse_kind_field(fields[0], i + 1);
    for (const auto& s : out)
      if (s.kind == kind) throw InputError("line " + std::to_string(i + 1) + ": duplicate delay");
    if (fields[1].empty()) throw InputError("line " + std::to_string(i + 1) + ": empty model");
    out.push_back({kind, std::string(fields[1]), parse_number(fields[2], i + 1)});
  }
  return out;
}

GeneratedDataset generate_pr(const Dataset& source, std::span<const ml::TrainedModel> models) {
  if (source.mode() == Mode::GeneratedPR)
    throw InputError("generation needs measured BQ or PR data, not GEN_PR");

  std::array<const ml::TrainedModel*, kDelayKindCount> by_kind{};
  for (const auto& m : models) {
    if (!m.metadata.delay_kind)
      throw InputError("model " + m.label() + " does not record its delay kind");
    auto& slot = by_kind[index_of(*m.metadata.delay_kind)];
    if (slot)
      throw InputError("more than one model for " +
                       std::string(display_name(*m.metadata.delay_kind)));
    slot = &m;
  }

  GeneratedDataset out;
  for (const auto kind : kAllDelayKinds)
    if (!by_kind[index_of(kind)])
      out.warnings.push_back("no model for " + std::string(display_name(kind)) +
                             " delay; column left empty");

  std::vector<MeasurementRecord> records;
  records.reserve(source.size());
  for (const auto& r : source) {
    MeasurementRecord copy = r;
    copy.mode = Mode::GeneratedPR;
    copy.delays.fill(std::nullopt);
    records.push_back(std::move(copy));
  }

  std::vector<std::size_t> row_index;
  const FeatureMatrix X = feature_matrix(source, row_index);
  if (X.rows() > 0) {
    for (const auto kind : kAllDelayKinds) {
      const auto* model = by_kind[index_of(kind)];
      if (!model) continue;
      const Eigen::VectorXd predicted = model->predict(X);
      for (std::size_t row = 0; row < row_index.size(); ++row) {
        auto& rec = records[row_index[row]];
        if (!is_sampled_at(kind, rec.timestamp_s)) continue;
        rec.set_delay(kind, std::max(0.01, predicted(static_cast<Eigen::Index>(row))));
      }
    }
  }
  out.dataset = Dataset(Mode::GeneratedPR, std::move(records));
  return out;
}

} // namespace raildelay::pipeline
