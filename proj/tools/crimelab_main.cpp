#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crimelab/common.hpp"
#include "crimelab/config.hpp"
#include "crimelab/runner.hpp"
#include "crimelab/synth.hpp"

namespace {

/// Shared --config/--seed/--out/--threads plumbing. Command line values
/// override the file; presence is tracked through the option pointers.
struct ConfigOpts {
    std::string config_path;
    uint64_t seed = 0;
    std::string out;
    int threads = 1;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

void add_config_options(CLI::App* cmd, ConfigOpts& opts, bool with_threads) {
    cmd->add_option("-c,--config", opts.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    opts.seed_opt = cmd->add_option("--seed", opts.seed, "override the config seed");
    opts.out_opt = cmd->add_option("--out", opts.out, "override the config output directory");
    if (with_threads) {
        cmd->add_option("--threads", opts.threads, "worker threads")
            ->check(CLI::PositiveNumber);
    }
}

crimelab::RunConfig resolve_config(const ConfigOpts& opts) {
    crimelab::RunConfig config = crimelab::load_run_config(opts.config_path);
    if (opts.seed_opt && opts.seed_opt->count() > 0) config.seed = opts.seed;
    if (opts.out_opt && opts.out_opt->count() > 0) config.out_dir = opts.out;
    return config;
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crimelab: incident classification experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    ConfigOpts ingest_opts;
    CLI::App* cmd_ingest =
        app.add_subcommand("ingest", "parse, clean and encode a raw incident CSV");
    add_config_options(cmd_ingest, ingest_opts, false);

    ConfigOpts stats_opts;
    double cell_size = 0.005;
    CLI::App* cmd_stats =
        app.add_subcommand("stats", "descriptive pivots, calendar profile and map grids");
    add_config_options(cmd_stats, stats_opts, false);
    cmd_stats->add_option("--cell-size", cell_size, "map grid cell size in degrees")
        ->check(CLI::PositiveNumber);

    ConfigOpts train_opts;
    CLI::App* cmd_train =
        app.add_subcommand("train", "fit the configured model on the full dataset");
    add_config_options(cmd_train, train_opts, true);

    ConfigOpts eval_opts;
    CLI::App* cmd_eval =
        app.add_subcommand("evaluate", "run the configured evaluation protocol");
    add_config_options(cmd_eval, eval_opts, true);

    std::string report_a, report_b, compare_csv;
    CLI::App* cmd_compare =
        app.add_subcommand("compare", "paired t-test over two runs' fold accuracies");
    cmd_compare->add_option("report_a", report_a, "first report.json")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_compare->add_option("report_b", report_b, "second report.json")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_compare->add_option("--out", compare_csv, "also write the comparison row as CSV");

    std::vector<long> counts{900, 90, 10};
    int dims = 2;
    double spread = 1.0;
    uint64_t synth_seed = 0;
    bool leaky = false;
    std::string synth_out = "synth.csv";
    CLI::App* cmd_synth =
        app.add_subcommand("synth", "generate a Gaussian-blob incident CSV for pipeline tests");
    cmd_synth->add_option("--counts", counts, "rows per class, e.g. 900,90,10")
        ->delimiter(',');
    cmd_synth->add_option("--dims", dims, "informative dimensions (1 to 8)");
    cmd_synth->add_option("--spread", spread, "within-class standard deviation");
    cmd_synth->add_option("--seed", synth_seed, "generator seed");
    cmd_synth->add_flag("--leaky", leaky, "make offense columns encode the class");
    cmd_synth->add_option("--out", synth_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_ingest->parsed()) {
            print_json(crimelab::ingest_to_files(resolve_config(ingest_opts)));
        } else if (cmd_stats->parsed()) {
            print_json(crimelab::stats_to_files(resolve_config(stats_opts), cell_size));
        } else if (cmd_train->parsed()) {
            print_json(crimelab::train_to_files(resolve_config(train_opts), train_opts.threads));
        } else if (cmd_eval->parsed()) {
            crimelab::RunConfig config = resolve_config(eval_opts);
            crimelab::EvalReport result =
                crimelab::run_experiment_to_files(config, eval_opts.threads);
            nlohmann::json headline;
            headline["out_dir"] = config.out_dir;
            if (result.report.contains("cv")) {
                headline["cv"] = {{"n_folds", result.report["cv"]["n_folds"]},
                                  {"mean_accuracy", result.report["cv"]["mean_accuracy"]},
                                  {"sd_accuracy", result.report["cv"]["sd_accuracy"]}};
            }
            if (result.report.contains("holdout")) {
                headline["holdout"] = {
                    {"accuracy", result.report["holdout"]["metrics"]["accuracy"]},
                    {"test_rows", result.report["holdout"]["test_rows"]}};
            }
            headline["warnings"] = result.report["warnings"];
            print_json(headline);
        } else if (cmd_compare->parsed()) {
            print_json(crimelab::compare_report_files(report_a, report_b, compare_csv));
        } else if (cmd_synth->parsed()) {
            crimelab::SynthSpec spec;
            spec.counts = counts;
            spec.dims = dims;
            spec.spread = spread;
            spec.seed = synth_seed;
            spec.leaky = leaky;
            crimelab::generate_synthetic_csv(spec, synth_out);
            long total = 0;
            for (long c : counts) total += c;
            print_json({{"path", synth_out},
                        {"rows", total},
                        {"classes", counts.size()},
                        {"dims", dims},
                        {"seed", synth_seed},
                        {"leaky", leaky}});
        }
        return 0;
    } catch (const crimelab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const crimelab::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
