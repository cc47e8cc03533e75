#include "crimelab/model.hpp"

#include "crimelab/adaboost.hpp"
#include "crimelab/forest.hpp"
#include "crimelab/knn.hpp"
#include "crimelab/lda.hpp"
#include "crimelab/tree.hpp"

namespace crimelab {

int argmax_row(const double* row, size_t len) {
    size_t best = 0;
    for (size_t i = 1; i < len; ++i) {
        if (row[i] > row[best]) best = i;
    }
    return static_cast<int>(best);
}

std::vector<int> Classifier::predict(const Matrix& X) const {
    Matrix proba = predict_proba(X);
    std::vector<int> out(X.rows);
    for (size_t r = 0; r < X.rows; ++r) out[r] = argmax_row(proba.row(r), proba.cols);
    return out;
}

void Classifier::check_features(const Matrix& X) const {
    if (X.cols != n_features()) {
        throw SchemaError(kind() + ": input has " + std::to_string(X.cols) +
                          " features, model was trained on " + std::to_string(n_features()));
    }
}

ModelSpec::Kind model_kind_from_name(const std::string& name) {
    if (name == "decision_tree") return ModelSpec::Kind::decision_tree;
    if (name == "random_forest") return ModelSpec::Kind::random_forest;
    if (name == "extra_trees") return ModelSpec::Kind::extra_trees;
    if (name == "knn") return ModelSpec::Kind::knn;
    if (name == "lda") return ModelSpec::Kind::lda;
    if (name == "adaboost") return ModelSpec::Kind::adaboost;
    throw ConfigError("unknown model kind: " + name);
}

std::string model_kind_name(ModelSpec::Kind kind) {
    switch (kind) {
        case ModelSpec::Kind::decision_tree: return "decision_tree";
        case ModelSpec::Kind::random_forest: return "random_forest";
        case ModelSpec::Kind::extra_trees: return "extra_trees";
        case ModelSpec::Kind::knn: return "knn";
        case ModelSpec::Kind::lda: return "lda";
        case ModelSpec::Kind::adaboost: return "adaboost";
    }
    throw ConfigError("unknown model kind");
}

ModelSpec default_model_spec(ModelSpec::Kind kind) {
    ModelSpec spec;
    spec.kind = kind;
    switch (kind) {
        case ModelSpec::Kind::decision_tree:
            spec.criterion = "entropy";
            spec.min_samples_leaf = 7;
            spec.max_depth = -1;
            break;
        case ModelSpec::Kind::random_forest:
            spec.criterion = "entropy";
            spec.n_trees = 100;
            spec.max_depth = 7;
            break;
        case ModelSpec::Kind::extra_trees:
            spec.criterion = "gini";
            spec.n_trees = 100;
            spec.max_depth = 7;
            break;
        case ModelSpec::Kind::knn:
            spec.knn_k = 5;
            break;
        case ModelSpec::Kind::lda:
            spec.lda_tol = 1e-9;
            break;
        case ModelSpec::Kind::adaboost:
            spec.n_estimators = 50;
            break;
    }
    return spec;
}

std::unique_ptr<Classifier> fit_model(const ModelSpec& spec, const Matrix& X,
                                      const std::vector<int>& y, int n_classes,
                                      int threads) {
    switch (spec.kind) {
        case ModelSpec::Kind::decision_tree:
            return train_decision_tree(X, y, n_classes, spec);
        case ModelSpec::Kind::random_forest:
            return train_random_forest(X, y, n_classes, spec, threads);
        case ModelSpec::Kind::extra_trees:
            return train_extra_trees(X, y, n_classes, spec, threads);
        case ModelSpec::Kind::knn:
            return train_knn(X, y, n_classes, spec);
        case ModelSpec::Kind::lda:
            return train_lda(X, y, n_classes, spec);
        case ModelSpec::Kind::adaboost:
            return train_adaboost(X, y, n_classes, spec);
    }
    throw ConfigError("unknown model kind");
}

}  // namespace crimelab
