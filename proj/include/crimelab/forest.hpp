#pragma once

#include "crimelab/tree.hpp"

namespace crimelab {

/// Tree committee: probability = mean of per-tree leaf class frequencies,
/// prediction = argmax of that mean.
class ForestModel : public Classifier {
public:
    ForestModel(std::string kind, std::vector<Tree> trees, int n_classes, size_t n_features,
                double oob_score = -1.0)
        : kind_(std::move(kind)), trees_(std::move(trees)), n_classes_(n_classes),
          n_features_(n_features), oob_score_(oob_score) {}

    std::string kind() const override { return kind_; }
    int n_classes() const override { return n_classes_; }
    size_t n_features() const override { return n_features_; }
    Matrix predict_proba(const Matrix& X) const override;
    void set_threads(int threads) override { threads_ = threads; }

    const std::vector<Tree>& trees() const { return trees_; }
    double oob_score() const { return oob_score_; }  // -1 when not computed

private:
    std::string kind_;
    std::vector<Tree> trees_;
    int n_classes_;
    size_t n_features_;
    double oob_score_;
    int threads_ = 1;
};

/// Bootstrap rows per tree, sqrt(d) candidate features per split, entropy,
/// depth cap 7 (stock settings live in default_model_spec).
std::unique_ptr<ForestModel> train_random_forest(const Matrix& X, const std::vector<int>& y,
                                                 int n_classes, const ModelSpec& spec,
                                                 int threads = 1);

/// Whole training set per tree, one uniform random threshold per candidate
/// feature, gini, depth cap 7.
std::unique_ptr<ForestModel> train_extra_trees(const Matrix& X, const std::vector<int>& y,
                                               int n_classes, const ModelSpec& spec,
                                               int threads = 1);

}  // namespace crimelab
