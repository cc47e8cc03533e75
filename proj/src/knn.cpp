#include "crimelab/knn.hpp"

#include <algorithm>

namespace crimelab {

Matrix KnnModel::predict_proba(const Matrix& X) const {
    check_features(X);
    size_t n_train = train_x_.rows;
    size_t k = static_cast<size_t>(k_);
    Matrix out(X.rows, static_cast<size_t>(n_classes_));
    parallel_for(X.rows, threads_, [&](size_t q) {
        std::vector<std::pair<double, size_t>> cand;
        cand.reserve(n_train);
        const double* xq = X.row(q);
        for (size_t i = 0; i < n_train; ++i) {
            cand.emplace_back(squared_distance(xq, train_x_.row(i), train_x_.cols), i);
        }
        // Pair order = (distance, train index): equidistant rows resolve to
        // the lower index.
        if (k < cand.size()) {
            std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(k), cand.end());
        } else {
            std::sort(cand.begin(), cand.end());
        }
        double* row = out.row(q);
        double inv = 1.0 / static_cast<double>(k);
        for (size_t m = 0; m < k; ++m) {
            row[static_cast<size_t>(train_y_[cand[m].second])] += inv;
        }
    });
    return out;
}

std::unique_ptr<KnnModel> train_knn(const Matrix& X, const std::vector<int>& y,
                                    int n_classes, const ModelSpec& spec) {
    if (X.rows == 0) throw std::invalid_argument("train_knn: empty input");
    if (spec.knn_k < 1) throw std::invalid_argument("train_knn: k must be positive");
    if (static_cast<size_t>(spec.knn_k) > X.rows) {
        throw std::invalid_argument("train_knn: k exceeds the training row count");
    }
    return std::make_unique<KnnModel>(X, y, spec.knn_k, n_classes);
}

}  // namespace crimelab
