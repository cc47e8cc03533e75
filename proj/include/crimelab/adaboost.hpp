#pragma once

#include "crimelab/tree.hpp"

namespace crimelab {

/// Multiclass boosting (SAMME) over depth-1 weighted trees. Prediction is
/// the class with the largest summed estimator weight; probabilities are the
/// vote mass normalized by the weight total.
class AdaBoostModel : public Classifier {
public:
    AdaBoostModel(std::vector<Tree> stumps, std::vector<double> alphas,
                  std::vector<double> staged_train_error, std::vector<double> prior,
                  bool degenerate, int n_classes, size_t n_features)
        : stumps_(std::move(stumps)), alphas_(std::move(alphas)),
          staged_train_error_(std::move(staged_train_error)), prior_(std::move(prior)),
          degenerate_(degenerate), n_classes_(n_classes), n_features_(n_features) {}

    std::string kind() const override { return "adaboost"; }
    int n_classes() const override { return n_classes_; }
    size_t n_features() const override { return n_features_; }
    Matrix predict_proba(const Matrix& X) const override;

    const std::vector<Tree>& stumps() const { return stumps_; }
    const std::vector<double>& alphas() const { return alphas_; }
    /// 0-1 training error of the partial ensemble after each accepted round.
    const std::vector<double>& staged_train_error() const { return staged_train_error_; }
    /// Training class frequencies, the fallback prediction when boosting
    /// degenerates.
    const std::vector<double>& prior() const { return prior_; }
    /// True when no stump beat the chance bound; the model fell back to
    /// predicting training class frequencies.
    bool degenerate() const { return degenerate_; }

private:
    std::vector<Tree> stumps_;
    std::vector<double> alphas_;
    std::vector<double> staged_train_error_;
    std::vector<double> prior_;
    bool degenerate_;
    int n_classes_;
    size_t n_features_;
};

std::unique_ptr<AdaBoostModel> train_adaboost(const Matrix& X, const std::vector<int>& y,
                                              int n_classes, const ModelSpec& spec);

}  // namespace crimelab
