#include "crimelab/config.hpp"

#include <fstream>
#include <set>

namespace crimelab {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (ok.find(key) == ok.end()) {
            throw ConfigError("unknown key \"" + key + "\" in " + where);
        }
    }
}

template <typename T>
T get_or(const json& j, const char* key, const T& fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

std::string get_string(const json& j, const char* key, const std::string& fallback,
                       const std::string& where) {
    return get_or<std::string>(j, key, fallback, where);
}

}  // namespace

bool is_ensemble_kind_name(const std::string& name) {
    try {
        ensemble_kind_from_name(name);
        return true;
    } catch (const ConfigError&) {
        return false;
    }
}

json model_spec_to_json(const ModelSpec& spec) {
    json j;
    j["kind"] = model_kind_name(spec.kind);
    j["n_trees"] = spec.n_trees;
    j["max_depth"] = spec.max_depth;
    j["min_samples_leaf"] = spec.min_samples_leaf;
    j["max_leaf_nodes"] = spec.max_leaf_nodes;
    j["criterion"] = spec.criterion;
    j["bootstrap"] = spec.bootstrap;
    j["n_candidate_features"] = spec.n_candidate_features;
    j["compute_oob"] = spec.compute_oob;
    j["knn_k"] = spec.knn_k;
    j["lda_tol"] = spec.lda_tol;
    j["n_estimators"] = spec.n_estimators;
    return j;
}

ModelSpec model_spec_from_json(const json& j) {
    const std::string where = "model";
    check_keys(j, where,
               {"kind", "n_trees", "max_depth", "min_samples_leaf", "max_leaf_nodes",
                "criterion", "bootstrap", "n_candidate_features", "compute_oob", "knn_k",
                "lda_tol", "n_estimators"});
    const std::string kind_name = get_string(j, "kind", "", where);
    if (kind_name.empty()) throw ConfigError("model.kind is required");
    ModelSpec spec = default_model_spec(model_kind_from_name(kind_name));
    spec.n_trees = get_or(j, "n_trees", spec.n_trees, where);
    spec.max_depth = get_or(j, "max_depth", spec.max_depth, where);
    spec.min_samples_leaf = get_or(j, "min_samples_leaf", spec.min_samples_leaf, where);
    spec.max_leaf_nodes = get_or(j, "max_leaf_nodes", spec.max_leaf_nodes, where);
    spec.criterion = get_string(j, "criterion", spec.criterion, where);
    spec.bootstrap = get_or(j, "bootstrap", spec.bootstrap, where);
    spec.n_candidate_features =
        get_or(j, "n_candidate_features", spec.n_candidate_features, where);
    spec.compute_oob = get_or(j, "compute_oob", spec.compute_oob, where);
    spec.knn_k = get_or(j, "knn_k", spec.knn_k, where);
    spec.lda_tol = get_or(j, "lda_tol", spec.lda_tol, where);
    spec.n_estimators = get_or(j, "n_estimators", spec.n_estimators, where);
    return spec;
}

json ensemble_spec_to_json(const EnsembleSpec& spec) {
    json j;
    j["kind"] = ensemble_kind_name(spec.kind);
    j["bagging"] = {{"n_bags", spec.bagging.n_bags},
                    {"max_samples", spec.bagging.max_samples},
                    {"max_features", spec.bagging.max_features}};
    j["weights"] = spec.weights;
    j["bag_each_base"] = spec.bag_each_base;
    if (!spec.base_overrides.empty()) {
        json bases = json::array();
        for (const ModelSpec& base : spec.base_overrides) {
            bases.push_back(model_spec_to_json(base));
        }
        j["bases"] = std::move(bases);
    }
    return j;
}

EnsembleSpec ensemble_spec_from_json(const json& j) {
    const std::string where = "model";
    check_keys(j, where, {"kind", "bagging", "weights", "bag_each_base", "bases"});
    const std::string kind_name = get_string(j, "kind", "", where);
    if (kind_name.empty()) throw ConfigError("model.kind is required");
    EnsembleSpec spec;
    spec.kind = ensemble_kind_from_name(kind_name);
    if (j.contains("bagging")) {
        const json& b = j.at("bagging");
        check_keys(b, "model.bagging", {"n_bags", "max_samples", "max_features"});
        spec.bagging.n_bags = get_or(b, "n_bags", spec.bagging.n_bags, "model.bagging");
        spec.bagging.max_samples =
            get_or(b, "max_samples", spec.bagging.max_samples, "model.bagging");
        spec.bagging.max_features =
            get_or(b, "max_features", spec.bagging.max_features, "model.bagging");
    }
    spec.weights = get_or(j, "weights", spec.weights, where);
    spec.bag_each_base = get_or(j, "bag_each_base", spec.bag_each_base, where);
    if (j.contains("bases")) {
        if (!j.at("bases").is_array()) throw ConfigError("model.bases must be an array");
        for (const json& base : j.at("bases")) {
            spec.base_overrides.push_back(model_spec_from_json(base));
        }
    }
    if (spec.bagging.n_bags < 1) throw ConfigError("bagging.n_bags must be >= 1");
    if (!(spec.bagging.max_samples > 0.0 && spec.bagging.max_samples <= 1.0)) {
        throw ConfigError("bagging.max_samples must be in (0, 1]");
    }
    if (!(spec.bagging.max_features > 0.0 && spec.bagging.max_features <= 1.0)) {
        throw ConfigError("bagging.max_features must be in (0, 1]");
    }
    return spec;
}

RunConfig config_from_json(const json& j) {
    check_keys(j, "run config",
               {"dataset", "seed", "cleaning", "exclude_leaky_features", "sampler",
                "selector", "model", "protocol", "test_fraction", "n_folds",
                "legacy_presample", "clamp_normalized", "out_dir"});
    RunConfig config;
    config.dataset = get_string(j, "dataset", config.dataset, "run config");
    config.seed = get_or<uint64_t>(j, "seed", config.seed, "run config");

    if (j.contains("cleaning")) {
        const json& c = j.at("cleaning");
        check_keys(c, "cleaning", {"missing_rows", "sentinel_value"});
        const std::string action = get_string(c, "missing_rows", "drop", "cleaning");
        if (action == "drop") {
            config.cleaning.missing_row_action = CleaningPolicy::MissingRowAction::drop;
        } else if (action == "sentinel") {
            config.cleaning.missing_row_action = CleaningPolicy::MissingRowAction::sentinel;
        } else {
            throw ConfigError("cleaning.missing_rows must be \"drop\" or \"sentinel\"");
        }
        config.cleaning.sentinel_value =
            get_or(c, "sentinel_value", config.cleaning.sentinel_value, "cleaning");
    }
    config.exclude_leaky_features =
        get_or(j, "exclude_leaky_features", config.exclude_leaky_features, "run config");

    if (j.contains("sampler")) {
        const json& s = j.at("sampler");
        check_keys(s, "sampler", {"kind", "smote_k"});
        config.sampler.kind =
            sampler_kind_from_name(get_string(s, "kind", "none", "sampler"));
        config.sampler.smote_k = get_or(s, "smote_k", config.sampler.smote_k, "sampler");
        if (config.sampler.smote_k < 1) throw ConfigError("sampler.smote_k must be >= 1");
    }
    if (j.contains("selector")) {
        const json& s = j.at("selector");
        check_keys(s, "selector", {"kind", "k", "threshold"});
        config.selector.kind =
            selector_kind_from_name(get_string(s, "kind", "none", "selector"));
        config.selector.k = get_or(s, "k", config.selector.k, "selector");
        config.selector.threshold =
            get_or(s, "threshold", config.selector.threshold, "selector");
        if (config.selector.kind == FeatureSelectorSpec::Kind::anova_k_best &&
            config.selector.k < 1) {
            throw ConfigError("selector.k must be >= 1");
        }
    }

    if (j.contains("model")) {
        const json& m = j.at("model");
        if (!m.is_object() || !m.contains("kind")) {
            throw ConfigError("model must be an object with a kind");
        }
        std::string kind_name;
        try {
            kind_name = m.at("kind").get<std::string>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("model.kind: ") + e.what());
        }
        if (is_ensemble_kind_name(kind_name)) {
            config.use_ensemble = true;
            config.ensemble = ensemble_spec_from_json(m);
        } else {
            config.use_ensemble = false;
            config.model = model_spec_from_json(m);
        }
    }

    config.protocol = get_string(j, "protocol", config.protocol, "run config");
    if (config.protocol != "cv10" && config.protocol != "holdout" &&
        config.protocol != "both") {
        throw ConfigError("protocol must be \"cv10\", \"holdout\", or \"both\"");
    }
    config.test_fraction = get_or(j, "test_fraction", config.test_fraction, "run config");
    if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
        throw ConfigError("test_fraction must be in (0, 1)");
    }
    config.n_folds = get_or(j, "n_folds", config.n_folds, "run config");
    if (config.n_folds < 2) throw ConfigError("n_folds must be >= 2");
    config.legacy_presample =
        get_or(j, "legacy_presample", config.legacy_presample, "run config");
    config.clamp_normalized =
        get_or(j, "clamp_normalized", config.clamp_normalized, "run config");
    config.out_dir = get_string(j, "out_dir", config.out_dir, "run config");
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const RunConfig& config, bool include_out_dir) {
    json j;
    j["dataset"] = config.dataset;
    j["seed"] = config.seed;
    j["cleaning"] = {
        {"missing_rows",
         config.cleaning.missing_row_action == CleaningPolicy::MissingRowAction::drop
             ? "drop"
             : "sentinel"},
        {"sentinel_value", config.cleaning.sentinel_value}};
    j["exclude_leaky_features"] = config.exclude_leaky_features;
    j["sampler"] = {{"kind", sampler_kind_name(config.sampler.kind)},
                    {"smote_k", config.sampler.smote_k}};
    j["selector"] = {{"kind", selector_kind_name(config.selector.kind)},
                     {"k", config.selector.k},
                     {"threshold", config.selector.threshold}};
    j["model"] = config.use_ensemble ? ensemble_spec_to_json(config.ensemble)
                                     : model_spec_to_json(config.model);
    j["protocol"] = config.protocol;
    j["test_fraction"] = config.test_fraction;
    j["n_folds"] = config.n_folds;
    j["legacy_presample"] = config.legacy_presample;
    j["clamp_normalized"] = config.clamp_normalized;
    if (include_out_dir) j["out_dir"] = config.out_dir;
    return j;
}

}  // namespace crimelab
