#include "crimelab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crimelab/analytics.hpp"
#include "crimelab/csv.hpp"
#include "crimelab/metrics.hpp"
#include "crimelab/model_io.hpp"
#include "crimelab/preprocess.hpp"

namespace crimelab {

namespace {

// Stream tags for the seeds derived from the master seed. Frozen: changing
// any of these changes every published result.
constexpr uint64_t kShuffleStream = 0xA1;
constexpr uint64_t kSplitStream = 0xA2;
constexpr uint64_t kFoldStream = 0xA3;
constexpr uint64_t kLegacySampleStream = 0x1E6A;
constexpr uint64_t kHoldoutStream = 0x401D;
constexpr uint64_t kFoldUnitStream = 0xF01D00;  // + fold index
constexpr uint64_t kTrainStream = 0x7EA1;
// Within a unit: sampler = derive_seed(unit, 1), model = derive_seed(unit, 2).

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Tags configuration and data failures with the pipeline stage they came
/// from. Anything else propagates untouched (internal error, exit code 4).
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError("stage " + name + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError("stage " + name + ": " + e.what());
    }
}

/// Every row in exactly one of train/test. A violation is a runner bug, not
/// a data problem, so it throws logic_error.
void audit_partition(size_t n, const std::vector<size_t>& train,
                     const std::vector<size_t>& test) {
    std::vector<uint8_t> seen(n, 0);
    auto mark = [&](const std::vector<size_t>& idx) {
        for (size_t i : idx) {
            if (i >= n) throw std::logic_error("partition audit: index " + std::to_string(i) +
                                               " out of range");
            if (seen[i]) throw std::logic_error("partition audit: row " + std::to_string(i) +
                                                " assigned twice");
            seen[i] = 1;
        }
    };
    mark(train);
    mark(test);
    for (size_t i = 0; i < n; ++i) {
        if (!seen[i]) throw std::logic_error("partition audit: row " + std::to_string(i) +
                                             " unassigned");
    }
}

struct FittedUnit {
    NormalizationParams params;
    std::vector<size_t> selected;  // kept columns, ascending; identity when no selector
    std::unique_ptr<Classifier> model;
    std::vector<std::string> warnings;
};

/// Training side of one evaluation unit: normalize, resample, select, fit.
/// All randomness comes from streams of unit_seed, so a unit is reproducible
/// in isolation.
FittedUnit fit_unit(const RunConfig& config, const Matrix& Xtrain_raw,
                    const std::vector<int>& ytrain_in, int n_classes, uint64_t unit_seed,
                    int threads, bool presampled) {
    FittedUnit out;
    out.params = fit_minmax(Xtrain_raw);
    out.params.clamp = config.clamp_normalized;
    Matrix Xtrain = apply_minmax(Xtrain_raw, out.params);
    std::vector<int> ytrain = ytrain_in;

    if (!presampled && config.sampler.kind != SamplerSpec::Kind::none) {
        SamplerSpec sampler = config.sampler;
        sampler.seed = derive_seed(unit_seed, 1);
        ResampleResult res = apply_sampler(sampler, Xtrain, ytrain);
        Xtrain = std::move(res.X);
        ytrain = std::move(res.y);
        out.warnings = std::move(res.warnings);
    }

    out.selected = select_features(config.selector, Xtrain, ytrain);
    if (out.selected.size() != Xtrain.cols) Xtrain = take_cols(Xtrain, out.selected);

    if (config.use_ensemble) {
        EnsembleSpec spec = config.ensemble;
        spec.seed = derive_seed(unit_seed, 2);
        out.model = fit_ensemble(spec, Xtrain, ytrain, n_classes, threads);
    } else {
        ModelSpec spec = config.model;
        spec.seed = derive_seed(unit_seed, 2);
        out.model = fit_model(spec, Xtrain, ytrain, n_classes, threads);
    }
    out.model->set_threads(threads);
    return out;
}

/// Hard voters are ranked by their vote shares so the scores agree with the
/// decision rule; everything else ranks by predict_proba.
Matrix ranking_scores(const Classifier& model, const Matrix& X) {
    if (const auto* hv = dynamic_cast<const HardVoteEnsemble*>(&model)) {
        return hv->vote_fractions(X);
    }
    if (const auto* bagged = dynamic_cast<const BaggedModel*>(&model)) {
        return bagged->vote_fractions(X);
    }
    return model.predict_proba(X);
}

struct UnitResult {
    std::vector<int> preds;
    Matrix scores;  // n_test x n_classes
    std::vector<std::string> warnings;
};

UnitResult evaluate_unit(const RunConfig& config, const Matrix& Xtrain_raw,
                         const std::vector<int>& ytrain, const Matrix& Xtest_raw,
                         int n_classes, uint64_t unit_seed, int threads, bool presampled) {
    FittedUnit fitted =
        fit_unit(config, Xtrain_raw, ytrain, n_classes, unit_seed, threads, presampled);
    Matrix Xtest = apply_minmax(Xtest_raw, fitted.params);
    if (fitted.selected.size() != Xtest.cols) Xtest = take_cols(Xtest, fitted.selected);
    UnitResult out;
    out.preds = fitted.model->predict(Xtest);
    out.scores = ranking_scores(*fitted.model, Xtest);
    out.warnings = std::move(fitted.warnings);
    return out;
}

struct MetricsArtifacts {
    ConfusionMatrix cm;
    PrfTable prf;
    std::vector<std::optional<RocCurve>> roc;  // per class; nullopt = undefined
    std::vector<std::string> roc_notes;        // reason when undefined
};

MetricsArtifacts compute_metrics(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred, const Matrix& scores,
                                 int n_classes) {
    MetricsArtifacts out;
    out.cm = confusion_matrix(y_true, y_pred, n_classes);
    out.prf = precision_recall_f1(out.cm);
    out.roc.resize(static_cast<size_t>(n_classes));
    out.roc_notes.resize(static_cast<size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c) {
        try {
            out.roc[static_cast<size_t>(c)] = roc_ovr(y_true, scores, c);
        } catch (const DataError& e) {
            out.roc_notes[static_cast<size_t>(c)] = e.what();
        }
    }
    return out;
}

nlohmann::json metrics_json(const MetricsArtifacts& m, const std::vector<int>& y_true,
                            const std::vector<int>& y_pred,
                            const std::vector<std::string>& class_names) {
    nlohmann::json j;
    // Accuracy comes from the emitted confusion matrix, so the two can never
    // disagree in a report.
    j["accuracy"] = accuracy_from_confusion(m.cm);
    j["mse"] = mse_labels(y_true, y_pred);

    nlohmann::json rows = nlohmann::json::array();
    for (size_t t = 0; t < m.cm.n_classes; ++t) {
        nlohmann::json row = nlohmann::json::array();
        for (size_t p = 0; p < m.cm.n_classes; ++p) row.push_back(m.cm.at(t, p));
        rows.push_back(std::move(row));
    }
    j["confusion"] = {{"n_classes", m.cm.n_classes}, {"rows_true_cols_pred", rows}};

    nlohmann::json per = nlohmann::json::array();
    for (size_t c = 0; c < m.prf.per_class.size(); ++c) {
        const PrfRow& r = m.prf.per_class[c];
        per.push_back({{"class", c},
                       {"name", class_names[c]},
                       {"precision", r.precision},
                       {"recall", r.recall},
                       {"f1", r.f1},
                       {"support", r.support},
                       {"zero_division", r.precision_zero_division || r.recall_zero_division ||
                                             r.f1_zero_division}});
    }
    j["prf"] = {{"per_class", per},
                {"macro",
                 {{"precision", m.prf.macro_precision},
                  {"recall", m.prf.macro_recall},
                  {"f1", m.prf.macro_f1}}},
                {"weighted",
                 {{"precision", m.prf.weighted_precision},
                  {"recall", m.prf.weighted_recall},
                  {"f1", m.prf.weighted_f1}}},
                {"any_zero_division", m.prf.any_zero_division}};

    nlohmann::json roc = nlohmann::json::array();
    for (size_t c = 0; c < m.roc.size(); ++c) {
        nlohmann::json entry;
        entry["class"] = c;
        entry["name"] = class_names[c];
        if (m.roc[c]) {
            entry["auc"] = m.roc[c]->auc;
        } else {
            entry["auc"] = nullptr;
            entry["note"] = m.roc_notes[c];
        }
        roc.push_back(std::move(entry));
    }
    j["roc"] = roc;
    return j;
}

struct BlockArtifacts {
    MetricsArtifacts metrics;
    std::vector<double> fold_accuracies;  // cv only
};

struct RunArtifacts {
    std::optional<BlockArtifacts> cv;
    std::optional<BlockArtifacts> holdout;
    std::vector<std::string> class_names;
};

FeatureTable ingest_stage(const RunConfig& config, IngestReport& report) {
    return stage("ingest", [&] {
        FeatureTable table = ingest_csv(config.dataset, config.cleaning, report);
        if (config.exclude_leaky_features) {
            table = table.drop_columns({"offense_code", "offense_type_id"});
        }
        return table;
    });
}

/// Legacy protocol support: resample the whole table (raw feature space,
/// ingest order) before any split, so synthetic neighbors leak across
/// train/test boundaries exactly as the original pipeline leaked them.
bool presample_stage(const RunConfig& config, FeatureTable& table,
                     std::vector<std::string>& warnings) {
    if (!config.legacy_presample || config.sampler.kind == SamplerSpec::Kind::none) {
        return false;
    }
    stage("presample", [&] {
        SamplerSpec sampler = config.sampler;
        sampler.seed = derive_seed(config.seed, kLegacySampleStream);
        ResampleResult res = apply_sampler(sampler, table.matrix, table.labels);
        table.matrix = std::move(res.X);
        table.labels = std::move(res.y);
        for (const std::string& w : res.warnings) warnings.push_back("presample: " + w);
    });
    return true;
}

EvalReport run_experiment_impl(const RunConfig& config, int threads,
                               RunArtifacts* artifacts) {
    if (threads < 1) threads = 1;
    Clock::time_point t_start = Clock::now();
    nlohmann::json timings;
    timings["threads"] = threads;
    nlohmann::json stages_ms = nlohmann::json::object();

    Clock::time_point t0 = Clock::now();
    IngestReport ingest_report;
    FeatureTable table = ingest_stage(config, ingest_report);
    stages_ms["ingest"] = ms_since(t0);

    std::vector<std::string> warnings;

    t0 = Clock::now();
    bool presampled = presample_stage(config, table, warnings);
    if (presampled) stages_ms["presample"] = ms_since(t0);

    t0 = Clock::now();
    table = stage("shuffle",
                  [&] { return shuffle_rows(table, derive_seed(config.seed, kShuffleStream)); });
    stages_ms["shuffle"] = ms_since(t0);

    const size_t n = table.n_rows();
    const int n_classes = table.n_classes();

    nlohmann::json report;
    report["schema_version"] = 1;
    report["config"] = config_to_json(config, false);
    report["ingest"] = nlohmann::json::parse(ingest_report.to_json());
    report["data"] = {{"rows", n},
                      {"features", table.n_features()},
                      {"classes", n_classes},
                      {"class_names", table.class_names},
                      {"feature_names", table.column_names}};

    const bool want_holdout = config.protocol == "holdout" || config.protocol == "both";
    const bool want_cv = config.protocol == "cv10" || config.protocol == "both";

    if (want_holdout) {
        t0 = Clock::now();
        SplitPlan plan = stage("split", [&] {
            return stratified_holdout_split(table.labels, config.test_fraction,
                                            derive_seed(config.seed, kSplitStream));
        });
        for (const std::string& w : plan.warnings) warnings.push_back("split: " + w);
        audit_partition(n, plan.train_indices, plan.test_indices);

        Matrix Xtrain = take_rows(table.matrix, plan.train_indices);
        Matrix Xtest = take_rows(table.matrix, plan.test_indices);
        std::vector<int> ytrain = take(table.labels, plan.train_indices);
        std::vector<int> ytest = take(table.labels, plan.test_indices);

        UnitResult unit = stage("holdout", [&] {
            return evaluate_unit(config, Xtrain, ytrain, Xtest, n_classes,
                                 derive_seed(config.seed, kHoldoutStream), threads, presampled);
        });
        for (const std::string& w : unit.warnings) warnings.push_back("holdout: " + w);

        MetricsArtifacts m = stage(
            "holdout", [&] { return compute_metrics(ytest, unit.preds, unit.scores, n_classes); });
        report["holdout"] = {{"test_fraction", config.test_fraction},
                             {"train_rows", plan.train_indices.size()},
                             {"test_rows", plan.test_indices.size()},
                             {"metrics", metrics_json(m, ytest, unit.preds, table.class_names)}};
        if (artifacts) artifacts->holdout = BlockArtifacts{std::move(m), {}};
        stages_ms["holdout"] = ms_since(t0);
    }

    if (want_cv) {
        t0 = Clock::now();
        FoldPlan plan = stage("folds", [&] {
            return stratified_kfold_plan(table.labels, config.n_folds,
                                         derive_seed(config.seed, kFoldStream));
        });
        for (const std::string& w : plan.warnings) warnings.push_back("folds: " + w);

        const size_t k = static_cast<size_t>(plan.k);
        int outer = threads < plan.k ? threads : plan.k;
        if (outer < 1) outer = 1;
        int inner = threads / outer;
        if (inner < 1) inner = 1;

        std::vector<UnitResult> units(k);
        std::vector<std::vector<size_t>> test_sets(k);
        std::vector<double> fold_ms(k, 0.0);
        stage("cv", [&] {
            parallel_for(k, outer, [&](size_t f) {
                Clock::time_point tf = Clock::now();
                std::vector<size_t> test_idx = plan.fold_indices(static_cast<int>(f));
                std::vector<size_t> train_idx = plan.complement_indices(static_cast<int>(f));
                audit_partition(n, train_idx, test_idx);
                Matrix Xtrain = take_rows(table.matrix, train_idx);
                Matrix Xtest = take_rows(table.matrix, test_idx);
                std::vector<int> ytrain = take(table.labels, train_idx);
                units[f] = evaluate_unit(config, Xtrain, ytrain, Xtest, n_classes,
                                         derive_seed(config.seed, kFoldUnitStream + f), inner,
                                         presampled);
                test_sets[f] = std::move(test_idx);
                fold_ms[f] = ms_since(tf);
            });
        });

        std::vector<double> fold_acc(k, 0.0);
        std::vector<int> pooled_pred(n, -1);
        Matrix pooled_scores(n, static_cast<size_t>(n_classes));
        for (size_t f = 0; f < k; ++f) {
            const std::vector<size_t>& test_idx = test_sets[f];
            std::vector<int> ytest = take(table.labels, test_idx);
            fold_acc[f] = accuracy(ytest, units[f].preds);
            for (size_t i = 0; i < test_idx.size(); ++i) {
                pooled_pred[test_idx[i]] = units[f].preds[i];
                const double* src = units[f].scores.row(i);
                std::copy(src, src + n_classes, pooled_scores.row(test_idx[i]));
            }
            for (const std::string& w : units[f].warnings) {
                warnings.push_back("fold " + std::to_string(f + 1) + ": " + w);
            }
        }

        double mean = 0.0;
        for (double a : fold_acc) mean += a;
        mean /= static_cast<double>(fold_acc.size());
        double sd = 0.0;
        if (fold_acc.size() > 1) {
            double ss = 0.0;
            for (double a : fold_acc) ss += (a - mean) * (a - mean);
            sd = std::sqrt(ss / static_cast<double>(fold_acc.size() - 1));
        }

        MetricsArtifacts m = stage("cv", [&] {
            return compute_metrics(table.labels, pooled_pred, pooled_scores, n_classes);
        });
        report["cv"] = {{"n_folds", plan.k},
                        {"fold_accuracies", fold_acc},
                        {"mean_accuracy", mean},
                        {"sd_accuracy", sd},
                        {"pooled", metrics_json(m, table.labels, pooled_pred, table.class_names)}};
        if (artifacts) artifacts->cv = BlockArtifacts{std::move(m), fold_acc};
        timings["fold_ms"] = fold_ms;
        stages_ms["cv"] = ms_since(t0);
    }

    report["warnings"] = warnings;
    if (artifacts) artifacts->class_names = table.class_names;

    stages_ms["total"] = ms_since(t_start);
    timings["stages_ms"] = stages_ms;
    return EvalReport{std::move(report), std::move(timings)};
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << text;
    if (!out) throw DataError("write failed for " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

std::string out_directory(const RunConfig& config) {
    std::string dir = config.out_dir.empty() ? "." : config.out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

void export_block_files(const std::string& dir, const std::string& tag,
                        const BlockArtifacts& block,
                        const std::vector<std::string>& class_names) {
    const MetricsArtifacts& m = block.metrics;

    CsvTable confusion;
    confusion.header.push_back("true_class");
    for (const std::string& name : class_names) confusion.header.push_back(name);
    for (size_t t = 0; t < m.cm.n_classes; ++t) {
        std::vector<std::string> row;
        row.push_back(class_names[t]);
        for (size_t p = 0; p < m.cm.n_classes; ++p) row.push_back(std::to_string(m.cm.at(t, p)));
        confusion.rows.push_back(std::move(row));
    }
    write_csv_file(dir + "/confusion_" + tag + ".csv", confusion);

    CsvTable prf;
    prf.header = {"class", "name", "precision", "recall", "f1", "support"};
    for (size_t c = 0; c < m.prf.per_class.size(); ++c) {
        const PrfRow& r = m.prf.per_class[c];
        prf.rows.push_back({std::to_string(c), class_names[c], format_compact(r.precision),
                            format_compact(r.recall), format_compact(r.f1),
                            std::to_string(r.support)});
    }
    prf.rows.push_back({"macro", "", format_compact(m.prf.macro_precision),
                        format_compact(m.prf.macro_recall), format_compact(m.prf.macro_f1), ""});
    prf.rows.push_back({"weighted", "", format_compact(m.prf.weighted_precision),
                        format_compact(m.prf.weighted_recall), format_compact(m.prf.weighted_f1),
                        ""});
    write_csv_file(dir + "/prf_" + tag + ".csv", prf);

    for (size_t c = 0; c < m.roc.size(); ++c) {
        if (!m.roc[c]) continue;
        const RocCurve& curve = *m.roc[c];
        CsvTable points;
        points.header = {"threshold", "fpr", "tpr"};
        for (size_t i = 0; i < curve.fpr.size(); ++i) {
            points.rows.push_back({format_compact(curve.thresholds[i]),
                                   format_compact(curve.fpr[i]), format_compact(curve.tpr[i])});
        }
        write_csv_file(dir + "/roc_" + tag + "_class_" + std::to_string(c) + ".csv", points);
    }
}

std::vector<double> fold_accuracies_of(const nlohmann::json& report, const char* which) {
    if (!report.contains("cv") || !report["cv"].contains("fold_accuracies")) {
        throw ConfigError(std::string("report ") + which +
                          " has no cross-validation fold accuracies; rerun with protocol "
                          "cv10 or both");
    }
    const nlohmann::json& arr = report["cv"]["fold_accuracies"];
    if (!arr.is_array() || arr.empty()) {
        throw ConfigError(std::string("report ") + which +
                          " has an empty fold accuracy list");
    }
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) {
            throw DataError(std::string("report ") + which + ": non-numeric fold accuracy");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::string model_label(const nlohmann::json& report) {
    // The config echo holds either spec under "model"; kind names are unique
    // across both families.
    if (report.contains("config") && report["config"].contains("model") &&
        report["config"]["model"].contains("kind")) {
        return report["config"]["model"]["kind"].get<std::string>();
    }
    return "unknown";
}

nlohmann::json seed_of(const nlohmann::json& report) {
    if (report.contains("config") && report["config"].contains("seed")) {
        return report["config"]["seed"];
    }
    return nullptr;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

EvalReport run_experiment(const RunConfig& config, int threads) {
    return run_experiment_impl(config, threads, nullptr);
}

EvalReport run_experiment_to_files(const RunConfig& config, int threads) {
    RunArtifacts artifacts;
    EvalReport result = run_experiment_impl(config, threads, &artifacts);
    std::string dir = out_directory(config);
    write_json_file(dir + "/report.json", result.report);
    write_json_file(dir + "/timings.json", result.timings);

    if (artifacts.cv) {
        CsvTable folds;
        folds.header = {"fold", "accuracy"};
        const std::vector<double>& acc = artifacts.cv->fold_accuracies;
        for (size_t f = 0; f < acc.size(); ++f) {
            folds.rows.push_back({std::to_string(f + 1), format_compact(acc[f])});
        }
        folds.rows.push_back(
            {"mean", format_compact(result.report["cv"]["mean_accuracy"].get<double>())});
        folds.rows.push_back(
            {"sd", format_compact(result.report["cv"]["sd_accuracy"].get<double>())});
        write_csv_file(dir + "/cv_folds.csv", folds);
        export_block_files(dir, "cv", *artifacts.cv, artifacts.class_names);
    }
    if (artifacts.holdout) {
        export_block_files(dir, "holdout", *artifacts.holdout, artifacts.class_names);
    }
    return result;
}

nlohmann::json compare_reports(const nlohmann::json& report_a,
                               const nlohmann::json& report_b) {
    std::vector<double> acc_a = fold_accuracies_of(report_a, "a");
    std::vector<double> acc_b = fold_accuracies_of(report_b, "b");
    if (acc_a.size() != acc_b.size()) {
        throw ConfigError("fold counts differ: " + std::to_string(acc_a.size()) + " vs " +
                          std::to_string(acc_b.size()));
    }
    TTestResult tt = paired_t_test(acc_a, acc_b);

    nlohmann::json row;
    row["n_folds"] = tt.n;
    row["df"] = tt.df;
    row["mean_diff"] = tt.mean_diff;
    row["sd_diff"] = tt.sd_diff;
    // JSON has no infinity literal, so an infinite statistic travels as text.
    if (std::isfinite(tt.t)) {
        row["t"] = tt.t;
    } else {
        row["t"] = tt.t > 0 ? "inf" : "-inf";
    }
    row["p"] = tt.p;
    row["alpha"] = tt.alpha;
    row["reject"] = tt.reject;
    row["decision"] = tt.decision;
    row["model_a"] = model_label(report_a);
    row["model_b"] = model_label(report_b);
    row["seed_a"] = seed_of(report_a);
    row["seed_b"] = seed_of(report_b);
    row["config_a"] = report_a.value("config", nlohmann::json::object());
    row["config_b"] = report_b.value("config", nlohmann::json::object());
    return row;
}

nlohmann::json compare_report_files(const std::string& path_a, const std::string& path_b,
                                    const std::string& out_csv) {
    nlohmann::json row = compare_reports(read_json_file(path_a), read_json_file(path_b));
    if (!out_csv.empty()) {
        CsvTable csv;
        csv.header = {"model_a", "model_b", "n_folds", "t_statistic", "p_value",
                      "reject_at_0.05"};
        std::string t_text = row["t"].is_string() ? row["t"].get<std::string>()
                                                  : format_compact(row["t"].get<double>());
        csv.rows.push_back({row["model_a"].get<std::string>(), row["model_b"].get<std::string>(),
                            std::to_string(row["n_folds"].get<uint64_t>()), t_text,
                            format_compact(row["p"].get<double>()),
                            row["reject"].get<bool>() ? "true" : "false"});
        write_csv_file(out_csv, csv);
    }
    return row;
}

nlohmann::json train_to_files(const RunConfig& config, int threads) {
    if (threads < 1) threads = 1;
    IngestReport ingest_report;
    FeatureTable table = ingest_stage(config, ingest_report);

    std::vector<std::string> warnings;
    bool presampled = presample_stage(config, table, warnings);
    table = stage("shuffle",
                  [&] { return shuffle_rows(table, derive_seed(config.seed, kShuffleStream)); });

    FittedUnit fitted = stage("train", [&] {
        return fit_unit(config, table.matrix, table.labels, table.n_classes(),
                        derive_seed(config.seed, kTrainStream), threads, presampled);
    });
    for (const std::string& w : fitted.warnings) warnings.push_back("train: " + w);

    std::string dir = out_directory(config);
    save_model(*fitted.model, dir + "/model.bin");
    nlohmann::json summary = model_summary_json(*fitted.model);
    write_json_file(dir + "/model_summary.json", summary);

    std::vector<std::string> selected_names;
    selected_names.reserve(fitted.selected.size());
    for (size_t c : fitted.selected) selected_names.push_back(table.column_names[c]);

    nlohmann::json pipeline;
    pipeline["config"] = config_to_json(config, true);
    pipeline["normalization"] = nlohmann::json::parse(fitted.params.to_json());
    pipeline["selected_columns"] = fitted.selected;
    pipeline["selected_names"] = selected_names;
    pipeline["class_names"] = table.class_names;
    pipeline["feature_names_in"] = table.column_names;
    write_json_file(dir + "/pipeline.json", pipeline);

    nlohmann::json out;
    out["rows"] = table.n_rows();
    out["features_in"] = table.n_features();
    out["features_used"] = fitted.selected.size();
    out["classes"] = table.n_classes();
    out["warnings"] = warnings;
    out["model"] = summary;
    out["files"] = {{"model", dir + "/model.bin"},
                    {"model_summary", dir + "/model_summary.json"},
                    {"pipeline", dir + "/pipeline.json"}};
    return out;
}

nlohmann::json stats_to_files(const RunConfig& config, double cell_size) {
    if (!(cell_size > 0.0)) throw ConfigError("cell size must be positive");
    IngestReport ingest_report;
    // Leaky columns stay: these are descriptive counts, not model inputs.
    FeatureTable table = stage(
        "ingest", [&] { return ingest_csv(config.dataset, config.cleaning, ingest_report); });
    if (table.n_rows() == 0) throw DataError("stage stats: no rows left after cleaning");

    std::string dir = out_directory(config);
    const double sentinel = config.cleaning.sentinel_value;

    nlohmann::json files = nlohmann::json::array();
    std::vector<std::string> notes;
    auto emit = [&](const std::string& name) { files.push_back(name); };

    PivotTable category = stage("stats", [&] { return pivot_counts(table, "category"); });
    export_pivot_csv(dir + "/fig1_category_counts.csv", category, table.class_names);
    emit("fig1_category_counts.csv");

    GeoGrid grid_all =
        stage("stats", [&] { return geo_grid_counts(table, cell_size, {}, sentinel); });
    export_geogrid_geojson(dir + "/fig2_grid_all.geojson", grid_all);
    emit("fig2_grid_all.geojson");

    PivotTable district = stage("stats", [&] { return pivot_counts(table, "district_id"); });
    export_pivot_csv(dir + "/fig3_district_counts.csv", district);
    emit("fig3_district_counts.csv");

    PivotTable month = stage("stats", [&] { return pivot_counts(table, "month"); });
    export_pivot_csv(dir + "/fig4_month_counts.csv", month);
    emit("fig4_month_counts.csv");

    PivotTable hour_by_category =
        stage("stats", [&] { return pivot_counts(table, "hour", "category"); });
    export_pivot_csv(dir + "/fig5_hour_by_category.csv", hour_by_category, table.class_names);
    emit("fig5_hour_by_category.csv");

    int traffic_code = -1;
    for (size_t c = 0; c < table.class_names.size(); ++c) {
        if (table.class_names[c] == "traffic-accident") traffic_code = static_cast<int>(c);
    }
    if (traffic_code >= 0) {
        PivotTable hour_traffic = stage("stats", [&] {
            return pivot_counts(table, "hour", "",
                                {{"category", static_cast<double>(traffic_code)}});
        });
        export_pivot_csv(dir + "/fig6_hour_traffic_accident.csv", hour_traffic);
        emit("fig6_hour_traffic_accident.csv");
    } else {
        notes.push_back("no traffic-accident class present; hourly profile for it skipped");
    }

    PivotTable daily = stage("stats", [&] { return daily_average(table); });
    export_pivot_csv(dir + "/fig7_daily_average.csv", daily);
    emit("fig7_daily_average.csv");

    GeoGrid grid_traffic_d3 = stage("stats", [&] {
        return geo_grid_counts(table, cell_size, {{"is_traffic", 1.0}, {"district_id", 3.0}},
                               sentinel);
    });
    export_geogrid_geojson(dir + "/fig8_grid_traffic_district3.geojson", grid_traffic_d3);
    emit("fig8_grid_traffic_district3.geojson");

    GeoGrid grid_crime_traffic = stage("stats", [&] {
        return geo_grid_counts(table, cell_size, {{"is_crime", 1.0}, {"is_traffic", 1.0}},
                               sentinel);
    });
    export_geogrid_geojson(dir + "/fig9_grid_crime_and_traffic.geojson", grid_crime_traffic);
    emit("fig9_grid_crime_and_traffic.geojson");

    auto row_of = [](const PivotTable& p, int64_t key) {
        for (size_t i = 0; i < p.row_keys.size(); ++i) {
            if (p.row_keys[i] == key) return i;
        }
        throw std::logic_error("pivot key vanished");
    };

    nlohmann::json stats;
    stats["rows"] = table.n_rows();

    int64_t modal_code = category.modal_row_key();
    stats["modal_category"] = {
        {"code", modal_code},
        {"name", table.class_names.at(static_cast<size_t>(modal_code))},
        {"count",
         static_cast<uint64_t>(category.cells.at(row_of(category, modal_code), 0))}};

    PivotTable hour = stage("stats", [&] { return pivot_counts(table, "hour"); });
    int64_t peak = hour.modal_row_key();
    stats["peak_hour"] = {
        {"hour", peak},
        {"count", static_cast<uint64_t>(hour.cells.at(row_of(hour, peak), 0))}};

    int64_t quiet_key = daily.minimal_row_key();
    stats["quietest_day"] = {
        {"month", quiet_key / 100},
        {"day", quiet_key % 100},
        {"average", daily.cells.at(row_of(daily, quiet_key), 0)}};

    stats["files"] = files;
    stats["notes"] = notes;
    write_json_file(dir + "/stats.json", stats);
    return stats;
}

nlohmann::json ingest_to_files(const RunConfig& config) {
    IngestReport ingest_report;
    FeatureTable table = ingest_stage(config, ingest_report);

    std::string dir = out_directory(config);
    save_table(table, dir + "/table.bin");
    nlohmann::json report_json = nlohmann::json::parse(ingest_report.to_json());
    write_json_file(dir + "/ingest_report.json", report_json);

    nlohmann::json sidecar_extra;
    sidecar_extra["config"] = config_to_json(config, true);
    export_table_csv(table, dir + "/table.csv", sidecar_extra.dump());

    nlohmann::json out;
    out["rows"] = table.n_rows();
    out["features"] = table.n_features();
    out["classes"] = table.n_classes();
    out["ingest"] = report_json;
    out["files"] = {{"table", dir + "/table.bin"},
                    {"report", dir + "/ingest_report.json"},
                    {"csv", dir + "/table.csv"}};
    return out;
}

}  // namespace crimelab
