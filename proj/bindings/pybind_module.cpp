#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "crimelab/config.hpp"
#include "crimelab/ingest.hpp"
#include "crimelab/metrics.hpp"
#include "crimelab/runner.hpp"
#include "crimelab/synth.hpp"

namespace py = pybind11;

namespace {

// JSON crosses the boundary as text; the python package decodes it. That
// keeps this module a thin shell over the C++ library.
std::string run_experiment_json(const std::string& config_text, int threads) {
    crimelab::RunConfig config =
        crimelab::config_from_json(nlohmann::json::parse(config_text));
    return crimelab::run_experiment(config, threads).report.dump();
}

std::string run_experiment_to_files_json(const std::string& config_text, int threads) {
    crimelab::RunConfig config =
        crimelab::config_from_json(nlohmann::json::parse(config_text));
    return crimelab::run_experiment_to_files(config, threads).report.dump();
}

std::string train_json(const std::string& config_text, int threads) {
    crimelab::RunConfig config =
        crimelab::config_from_json(nlohmann::json::parse(config_text));
    return crimelab::train_to_files(config, threads).dump();
}

std::string stats_json(const std::string& config_text, double cell_size) {
    crimelab::RunConfig config =
        crimelab::config_from_json(nlohmann::json::parse(config_text));
    return crimelab::stats_to_files(config, cell_size).dump();
}

std::string compare_files_json(const std::string& path_a, const std::string& path_b,
                               const std::string& out_csv) {
    return crimelab::compare_report_files(path_a, path_b, out_csv).dump();
}

void generate_synthetic(const std::vector<long>& counts, const std::string& path, int dims,
                        double spread, uint64_t seed, bool leaky) {
    crimelab::SynthSpec spec;
    spec.counts = counts;
    spec.dims = dims;
    spec.spread = spread;
    spec.seed = seed;
    spec.leaky = leaky;
    crimelab::generate_synthetic_csv(spec, path);
}

py::dict paired_t_test_py(const std::vector<double>& a, const std::vector<double>& b) {
    crimelab::TTestResult r = crimelab::paired_t_test(a, b);
    py::dict out;
    out["n"] = r.n;
    out["df"] = r.df;
    out["mean_diff"] = r.mean_diff;
    out["sd_diff"] = r.sd_diff;
    out["t"] = r.t;
    out["p"] = r.p;
    out["alpha"] = r.alpha;
    out["reject"] = r.reject;
    out["decision"] = r.decision;
    return out;
}

}  // namespace

PYBIND11_MODULE(_crimelab, m) {
    m.doc() = "incident classification experiments (C++ core)";
    m.attr("__version__") = "0.1.0";

    py::register_exception<crimelab::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<crimelab::DataError>(m, "DataError", PyExc_RuntimeError);

    m.def("run_experiment_json", &run_experiment_json, py::arg("config_json"),
          py::arg("threads") = 1,
          "Run the configured evaluation protocol; returns the report as JSON text.");
    m.def("run_experiment_to_files_json", &run_experiment_to_files_json,
          py::arg("config_json"), py::arg("threads") = 1,
          "Like run_experiment_json, also writing report files under out_dir.");
    m.def("train_json", &train_json, py::arg("config_json"), py::arg("threads") = 1,
          "Fit on the full dataset and write model files; returns a JSON summary.");
    m.def("stats_json", &stats_json, py::arg("config_json"), py::arg("cell_size") = 0.005,
          "Write descriptive pivots and map grids; returns stats as JSON text.");
    m.def("compare_files_json", &compare_files_json, py::arg("report_a"),
          py::arg("report_b"), py::arg("out_csv") = std::string(),
          "Paired t-test over two reports' fold accuracies; returns the row as JSON.");
    m.def("generate_synthetic_csv", &generate_synthetic, py::arg("counts"), py::arg("path"),
          py::arg("dims") = 2, py::arg("spread") = 1.0, py::arg("seed") = 0,
          py::arg("leaky") = false,
          "Write a Gaussian-blob incident CSV in the raw snapshot schema.");
    m.def("paired_t_test", &paired_t_test_py, py::arg("a"), py::arg("b"),
          "Paired two-tailed t-test on elementwise differences a - b.");
    m.def("accuracy", &crimelab::accuracy, py::arg("y_true"), py::arg("y_pred"));
    m.def("category_names", [] { return crimelab::denver_category_names(); },
          "The 15 offense categories, in label code order.");
}
