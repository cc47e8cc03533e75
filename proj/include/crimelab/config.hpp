#pragma once

#include <string>

#include <json.hpp>

#include "crimelab/ensemble.hpp"
#include "crimelab/featsel.hpp"
#include "crimelab/ingest.hpp"
#include "crimelab/model.hpp"
#include "crimelab/resample.hpp"

namespace crimelab {

/// One experiment, fully specified. `seed` is the only seed: every stage
/// (shuffle, folds, samplers, models) draws a derived stream from it, so the
/// component-level seed fields are ignored here and stamped by the runner.
struct RunConfig {
    std::string dataset;  // raw incident CSV
    uint64_t seed = 0;
    CleaningPolicy cleaning;
    bool exclude_leaky_features = false;
    SamplerSpec sampler;
    FeatureSelectorSpec selector;
    bool use_ensemble = false;  // which of model/ensemble applies
    ModelSpec model;
    EnsembleSpec ensemble;
    std::string protocol = "cv10";  // cv10 | holdout | both
    double test_fraction = 0.24;
    int n_folds = 10;
    /// Resample before folding (leaks synthetic neighbors across folds);
    /// kept for comparison against the leak-free default.
    bool legacy_presample = false;
    bool clamp_normalized = false;  // clamp test rows into [0, 1]
    std::string out_dir = "runs";
};

/// Strict parse: unknown keys, bad enum names, and out-of-range values raise
/// ConfigError. Missing keys take the defaults above; a model object missing
/// knobs takes the stock values for its kind.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Fully resolved echo; parsing it back reproduces the config. The report
/// copy omits out_dir so a run's bytes do not depend on where it lands.
nlohmann::json config_to_json(const RunConfig& config, bool include_out_dir = true);

nlohmann::json model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& j);
nlohmann::json ensemble_spec_to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_spec_from_json(const nlohmann::json& j);

/// True when the name is an ensemble kind (model1..model4 lineups).
bool is_ensemble_kind_name(const std::string& name);

}  // namespace crimelab
