#pragma once

#include "crimelab/model.hpp"

namespace crimelab {

/// Linear discriminant analysis with the within-class covariance whitened
/// through an SVD of the centered scatter; components with singular values
/// below tol * largest are discarded. Discriminant per class:
///   delta_c(x) = xt . mt_c - ||mt_c||^2 / 2 + ln(prior_c)
/// with xt, mt_c the whitened row and class mean. Probabilities are the
/// softmax of the discriminants; classes unseen in training score zero.
class LdaModel : public Classifier {
public:
    LdaModel(std::vector<double> mean, Matrix projection, Matrix class_means_proj,
             std::vector<double> class_bias, std::vector<char> present, int n_classes)
        : mean_(std::move(mean)), projection_(std::move(projection)),
          class_means_proj_(std::move(class_means_proj)), class_bias_(std::move(class_bias)),
          present_(std::move(present)), n_classes_(n_classes) {}

    std::string kind() const override { return "lda"; }
    int n_classes() const override { return n_classes_; }
    size_t n_features() const override { return mean_.size(); }
    Matrix predict_proba(const Matrix& X) const override;
    void set_threads(int threads) override { threads_ = threads; }

    /// Raw discriminant scores (absent classes at -infinity).
    Matrix decision_scores(const Matrix& X) const;

    size_t rank() const { return projection_.cols; }
    const Matrix& projection() const { return projection_; }
    const std::vector<double>& feature_mean() const { return mean_; }
    const Matrix& class_means_proj() const { return class_means_proj_; }
    const std::vector<double>& class_bias() const { return class_bias_; }
    const std::vector<char>& present() const { return present_; }

private:
    std::vector<double> mean_;      // d
    Matrix projection_;             // d x r whitener
    Matrix class_means_proj_;       // K x r
    std::vector<double> class_bias_;
    std::vector<char> present_;
    int n_classes_;
    int threads_ = 1;
};

std::unique_ptr<LdaModel> train_lda(const Matrix& X, const std::vector<int>& y,
                                    int n_classes, const ModelSpec& spec);

}  // namespace crimelab
