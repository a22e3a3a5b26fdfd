#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raildelay/core/delay_kind.hpp"
#include "raildelay/core/record.hpp"
#include "raildelay/metrics/metrics.hpp"
#include "raildelay/ml/ensemble.hpp"

namespace raildelay::pipeline {

/// Trains one model per preset on the PR dataset. A train_fraction below 1
/// holds out the chronologically last records; 1 trains on everything.
/// Refuses anything but PR-mode data.
std::vector<ml::TrainedModel> train_models(const Dataset& pr, DelayKind kind,
                                           std::span<const ml::ModelPreset> presets,
                                           double train_fraction, std::uint64_t seed);

/// "<delay token>__<preset token>.rdm"; custom models use "custom".
std::string model_filename(const ml::TrainedModel& model);

enum class EvalScope { Full, Holdout };

std::string_view scope_name(EvalScope scope);
std::optional<EvalScope> parse_scope(std::string_view text);

/// Metric grid keyed by (delay kind, model column). Columns keep insertion
/// order, which is the preset declaration order when built by evaluate_models.
struct MetricsTable {
  std::string scope = "full";
  std::vector<DelayKind> kinds;
  std::vector<std::string> models;
  std::map<std::pair<DelayKind, std::string>, metrics::MetricsReport> cells;

  const metrics::MetricsReport* find(DelayKind kind, const std::string& model) const;
  void set(DelayKind kind, const std::string& model, const metrics::MetricsReport& report);
};

/// Every model must carry its delay kind in the training metadata.
MetricsTable evaluate_models(std::span<const ml::TrainedModel> models, const Dataset& dataset,
                             EvalScope scope, double train_fraction);

/// Delay,Metric,<models...>; rows RMSE, R2, MAE, Precision, Recall per kind.
/// Undefined values are written as NA, missing cells are left empty.
std::string metrics_table_csv(const MetricsTable& table);
MetricsTable parse_metrics_table(std::string_view csv);

struct Selection {
  DelayKind kind;
  std::string model;
  double rmse = 0.0;
};

/// Lowest RMSE per kind; ties go to the earlier column. Throws InputError when
/// any RMSE cell is missing.
std::vector<Selection> select_best(const MetricsTable& table);
std::string selection_csv(const std::vector<Selection>& selection);
std::vector<Selection> parse_selection_csv(std::string_view csv);

struct GeneratedDataset {
  Dataset dataset{Mode::GeneratedPR};
  std::vector<std::string> warnings;
};

/// Replaces the delays of a BQ (or PR) dataset with model predictions. Kinds
/// without a model are left empty and reported in `warnings`. Predictions are
/// clamped to at least 0.01 ms.
GeneratedDataset generate_pr(const Dataset& source, std::span<const ml::TrainedModel> models);

} // namespace raildelay::pipeline
