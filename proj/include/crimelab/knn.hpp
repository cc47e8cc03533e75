#pragma once

#include "crimelab/model.hpp"

namespace crimelab {

/// Lazy learner: stores the training rows; a query's probability row is the
/// class frequency among its k nearest stored rows (Euclidean). Distance
/// ties break toward the lower training-row index, vote ties toward the
/// lower class code.
class KnnModel : public Classifier {
public:
    KnnModel(Matrix train_x, std::vector<int> train_y, int k, int n_classes)
        : train_x_(std::move(train_x)), train_y_(std::move(train_y)), k_(k),
          n_classes_(n_classes) {}

    std::string kind() const override { return "knn"; }
    int n_classes() const override { return n_classes_; }
    size_t n_features() const override { return train_x_.cols; }
    Matrix predict_proba(const Matrix& X) const override;
    void set_threads(int threads) override { threads_ = threads; }

    int k() const { return k_; }
    const Matrix& train_x() const { return train_x_; }
    const std::vector<int>& train_y() const { return train_y_; }

private:
    Matrix train_x_;
    std::vector<int> train_y_;
    int k_;
    int n_classes_;
    int threads_ = 1;
};

std::unique_ptr<KnnModel> train_knn(const Matrix& X, const std::vector<int>& y,
                                    int n_classes, const ModelSpec& spec);

}  // namespace crimelab
