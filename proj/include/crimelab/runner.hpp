#pragma once

#include <string>

#include <json.hpp>

#include "crimelab/config.hpp"

namespace crimelab {

/// One experiment's outputs. `report` is the canonical result: identical
/// configs produce identical report bytes regardless of thread count or
/// output location. Wall-clock numbers live in `timings` and stay out of it.
struct EvalReport {
    nlohmann::json report;
    nlohmann::json timings;
};

/// Runs the configured pipeline: ingest, shuffle, then per evaluation unit
/// (holdout or each fold) fit min-max on the training rows, resample, select
/// features, fit, and score the held-out rows. Every stage failure carries a
/// stage tag. A train/test index audit runs on every unit.
EvalReport run_experiment(const RunConfig& config, int threads = 1);

/// run_experiment plus files under config.out_dir: report.json, timings.json,
/// fold table, confusion matrices, precision/recall tables, ROC point lists.
EvalReport run_experiment_to_files(const RunConfig& config, int threads = 1);

/// Paired t-test over two reports' cv fold accuracies (ConfigError when
/// either lacks them or fold counts differ). The row echoes both seeds and
/// configs.
nlohmann::json compare_reports(const nlohmann::json& report_a,
                               const nlohmann::json& report_b);
nlohmann::json compare_report_files(const std::string& path_a, const std::string& path_b,
                                    const std::string& out_csv = std::string());

/// Fits the configured model on the full dataset (same pipeline, no held-out
/// rows) and writes model.bin, model_summary.json, and pipeline.json (the
/// transforms a scorer must replay: normalization, feature mask, classes)
/// under config.out_dir.
nlohmann::json train_to_files(const RunConfig& config, int threads = 1);

/// Descriptive exports under config.out_dir: category/district/month/hour
/// pivots, hour pivot for the traffic-accident class, calendar-day averages,
/// and geographic grids (all incidents; is_traffic=1 in district 3; crime and
/// traffic co-occurring). Returns and writes stats.json with the headline
/// numbers (modal category, peak hour, quietest calendar day).
nlohmann::json stats_to_files(const RunConfig& config, double cell_size = 0.005);

/// Ingests per the config and writes table.bin, ingest_report.json, and a
/// decoded CSV copy under config.out_dir.
nlohmann::json ingest_to_files(const RunConfig& config);

}  // namespace crimelab
