#pragma once

#include <functional>

#include "crimelab/model.hpp"

namespace crimelab {

struct BaggingParams {
    int n_bags = 10;
    double max_samples = 0.5;
    double max_features = 0.5;
};

struct EnsembleSpec {
    enum class Kind { model1_hard_vote, model2_bagged, model3_weighted_soft, model4_bag_then_vote };
    Kind kind = Kind::model1_hard_vote;
    uint64_t seed = 0;
    BaggingParams bagging;
    std::vector<double> weights = {1.0, 2.0, 2.0};  // model3, aligned with its bases
    bool bag_each_base = false;  // model2 alternative: bag each base, then vote
    std::vector<ModelSpec> base_overrides;  // empty = stock lineup for the kind
};

EnsembleSpec::Kind ensemble_kind_from_name(const std::string& name);
std::string ensemble_kind_name(EnsembleSpec::Kind kind);

/// Majority vote over bases; vote-count ties resolve to the lowest class
/// code. predict_proba (mean of base probabilities) is for reporting and ROC
/// and is not the source of predict here.
class HardVoteEnsemble : public Classifier {
public:
    HardVoteEnsemble(std::string kind, std::vector<std::unique_ptr<Classifier>> bases,
                     int n_classes, size_t n_features)
        : kind_(std::move(kind)), bases_(std::move(bases)), n_classes_(n_classes),
          n_features_(n_features) {}

    std::string kind() const override { return kind_; }
    int n_classes() const override { return n_classes_; }
    size_t n_features() const override { return n_features_; }
    Matrix predict_proba(const Matrix& X) const override;
    std::vector<int> predict(const Matrix& X) const override;
    void set_threads(int threads) override;

    /// Share of bases voting for each class; the ranking scores consistent
    /// with the hard-vote decision rule.
    Matrix vote_fractions(const Matrix& X) const;

    const std::vector<std::unique_ptr<Classifier>>& bases() const { return bases_; }

private:
    std::string kind_;
    std::vector<std::unique_ptr<Classifier>> bases_;
    int n_classes_;
    size_t n_features_;
};

/// score(c) = sum_b w_b p_b(c) / sum_b w_b; prediction is the argmax, so the
/// shared argmax(proba) == predict contract holds.
class WeightedSoftVoteEnsemble : public Classifier {
public:
    WeightedSoftVoteEnsemble(std::string kind, std::vector<std::unique_ptr<Classifier>> bases,
                             std::vector<double> weights, int n_classes, size_t n_features)
        : kind_(std::move(kind)), bases_(std::move(bases)), weights_(std::move(weights)),
          n_classes_(n_classes), n_features_(n_features) {}

    std::string kind() const override { return kind_; }
    int n_classes() const override { return n_classes_; }
    size_t n_features() const override { return n_features_; }
    Matrix predict_proba(const Matrix& X) const override;
    void set_threads(int threads) override;

    const std::vector<std::unique_ptr<Classifier>>& bases() const { return bases_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::string kind_;
    std::vector<std::unique_ptr<Classifier>> bases_;
    std::vector<double> weights_;
    int n_classes_;
    size_t n_features_;
};

struct BagMember {
    std::unique_ptr<Classifier> model;
    std::vector<size_t> features;  // sorted column mask, applied at prediction
    std::vector<size_t> rows;      // training draw, kept in memory for replay checks
};

/// Copies of one base trained on seeded row/feature subsets; majority vote,
/// probability = mean over copies.
class BaggedModel : public Classifier {
public:
    BaggedModel(std::string kind, std::vector<BagMember> members, int n_classes,
                size_t n_features)
        : kind_(std::move(kind)), members_(std::move(members)), n_classes_(n_classes),
          n_features_(n_features) {}

    std::string kind() const override { return kind_; }
    int n_classes() const override { return n_classes_; }
    size_t n_features() const override { return n_features_; }
    Matrix predict_proba(const Matrix& X) const override;
    std::vector<int> predict(const Matrix& X) const override;
    void set_threads(int threads) override;

    /// Share of members voting for each class.
    Matrix vote_fractions(const Matrix& X) const;

    const std::vector<BagMember>& members() const { return members_; }
    std::vector<BagMember>& mutable_members() { return members_; }

private:
    std::string kind_;
    std::vector<BagMember> members_;
    int n_classes_;
    size_t n_features_;
};

/// Fits one bag copy: (rows x features) training view, derived seed.
using BaseFactory = std::function<std::unique_ptr<Classifier>(
    const Matrix& X, const std::vector<int>& y, int n_classes, uint64_t seed)>;

/// n_bags copies on ceil(max_samples*n) rows drawn with replacement and
/// ceil(max_features*d) features drawn without replacement (mask sorted).
/// Per-bag seeds derive from the master seed, so bag b is reproducible in
/// isolation.
std::unique_ptr<BaggedModel> bagging_fit(const BaseFactory& factory, const std::string& kind,
                                         const Matrix& X, const std::vector<int>& y,
                                         int n_classes, const BaggingParams& params,
                                         uint64_t seed, int threads = 1);

/// Row-draw and feature-mask streams for bag b of a bagging seed; exposed so
/// replay checks can reproduce a bag exactly.
uint64_t bagging_draw_seed(uint64_t seed, size_t bag);
uint64_t bagging_base_seed(uint64_t seed, size_t bag);
/// Seed handed to base i of the voting/bagged ensembles.
uint64_t ensemble_base_seed(uint64_t seed, size_t base);

std::unique_ptr<HardVoteEnsemble> ensemble1_fit(const Matrix& X, const std::vector<int>& y,
                                                int n_classes, const EnsembleSpec& spec,
                                                int threads = 1);
std::unique_ptr<Classifier> ensemble2_fit(const Matrix& X, const std::vector<int>& y,
                                          int n_classes, const EnsembleSpec& spec,
                                          int threads = 1);
std::unique_ptr<WeightedSoftVoteEnsemble> ensemble3_fit(const Matrix& X,
                                                        const std::vector<int>& y,
                                                        int n_classes,
                                                        const EnsembleSpec& spec,
                                                        int threads = 1);
std::unique_ptr<HardVoteEnsemble> ensemble4_fit(const Matrix& X, const std::vector<int>& y,
                                                int n_classes, const EnsembleSpec& spec,
                                                int threads = 1);

std::unique_ptr<Classifier> fit_ensemble(const EnsembleSpec& spec, const Matrix& X,
                                         const std::vector<int>& y, int n_classes,
                                         int threads = 1);

/// Stock base lineups: model1 {random_forest, decision_tree, lda},
/// model3 {random_forest, knn, extra_trees}, model4 {random_forest,
/// decision_tree, extra_trees}; model2 wraps model1's trio.
std::vector<ModelSpec> ensemble_default_bases(EnsembleSpec::Kind kind);

}  // namespace crimelab
