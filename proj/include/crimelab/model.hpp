#pragma once

#include <memory>
#include <string>
#include <vector>

#include "crimelab/common.hpp"

namespace crimelab {

/// Shared fit/predict contract. For the six base classifiers
/// argmax(predict_proba) == predict row for row; hard-vote ensembles override
/// predict with the vote and keep predict_proba for reporting.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual std::string kind() const = 0;
    virtual int n_classes() const = 0;
    virtual size_t n_features() const = 0;

    /// n x K rows, nonnegative, each summing to 1 within 1e-9.
    virtual Matrix predict_proba(const Matrix& X) const = 0;

    /// Class codes in [0, K). Default: argmax of predict_proba, probability
    /// ties resolved toward the lower class code.
    virtual std::vector<int> predict(const Matrix& X) const;

    /// Worker budget for prediction-time parallelism. Purely a speed hint:
    /// outputs are identical for any value.
    virtual void set_threads(int threads) { (void)threads; }

protected:
    void check_features(const Matrix& X) const;
};

/// Argmax with ties toward the lower index.
int argmax_row(const double* row, size_t len);

struct ModelSpec {
    enum class Kind { decision_tree, random_forest, extra_trees, knn, lda, adaboost };
    Kind kind = Kind::decision_tree;
    uint64_t seed = 0;

    // tree family
    int n_trees = 100;
    int max_depth = 7;             // -1 = unbounded (decision_tree default)
    int min_samples_leaf = 1;
    int max_leaf_nodes = -1;       // -1 = unbounded
    std::string criterion;         // "entropy" or "gini"; default depends on kind
    bool bootstrap = true;         // random_forest; extra_trees always trains on all rows
    int n_candidate_features = 0;  // 0 = kind default (sqrt(d) for forests), -1 = all
    bool compute_oob = false;      // random_forest only

    // knn
    int knn_k = 5;

    // lda
    double lda_tol = 1e-9;

    // adaboost
    int n_estimators = 50;
};

ModelSpec::Kind model_kind_from_name(const std::string& name);
std::string model_kind_name(ModelSpec::Kind kind);

/// Study-pipeline defaults for each kind.
ModelSpec default_model_spec(ModelSpec::Kind kind);

/// Trains the classifier the spec describes. n_classes fixes the probability
/// width (a training partition may lack some classes); threads bounds
/// tree-level parallelism and never changes the fitted model.
std::unique_ptr<Classifier> fit_model(const ModelSpec& spec, const Matrix& X,
                                      const std::vector<int>& y, int n_classes,
                                      int threads = 1);

}  // namespace crimelab
