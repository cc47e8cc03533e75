#include "crimelab/adaboost.hpp"

#include <algorithm>
#include <cmath>

namespace crimelab {

Matrix AdaBoostModel::predict_proba(const Matrix& X) const {
    check_features(X);
    Matrix out(X.rows, static_cast<size_t>(n_classes_));
    if (stumps_.empty()) {
        for (size_t r = 0; r < X.rows; ++r) {
            std::copy(prior_.begin(), prior_.end(), out.row(r));
        }
        return out;
    }
    double alpha_total = 0.0;
    for (double a : alphas_) alpha_total += a;
    for (size_t r = 0; r < X.rows; ++r) {
        double* row = out.row(r);
        const double* x = X.row(r);
        for (size_t m = 0; m < stumps_.size(); ++m) {
            row[static_cast<size_t>(stumps_[m].leaf_for(x).majority)] += alphas_[m];
        }
        for (int c = 0; c < n_classes_; ++c) row[static_cast<size_t>(c)] /= alpha_total;
    }
    return out;
}

std::unique_ptr<AdaBoostModel> train_adaboost(const Matrix& X, const std::vector<int>& y,
                                              int n_classes, const ModelSpec& spec) {
    size_t n = X.rows;
    if (n == 0) throw std::invalid_argument("train_adaboost: empty input");
    if (spec.n_estimators < 1) {
        throw std::invalid_argument("train_adaboost: n_estimators must be positive");
    }
    auto counts = class_counts(y, n_classes);
    size_t groups = 0;
    for (long c : counts) {
        if (c > 0) ++groups;
    }
    if (groups < 2) throw std::invalid_argument("train_adaboost: needs at least two classes");

    // Chance bound uses the classes actually present.
    double chance = 1.0 - 1.0 / static_cast<double>(groups);
    double log_k1 = std::log(static_cast<double>(groups) - 1.0);

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<Tree> stumps;
    std::vector<double> alphas;
    std::vector<double> staged_error;
    Matrix votes(n, static_cast<size_t>(n_classes));
    std::vector<int> pred(n);

    for (int round = 0; round < spec.n_estimators; ++round) {
        Tree stump = grow_weighted_stump(X, y, w, n_classes);
        double err = 0.0;
        for (size_t i = 0; i < n; ++i) {
            pred[i] = stump.leaf_for(X.row(i)).majority;
            if (pred[i] != y[i]) err += w[i];
        }
        if (err >= chance) break;  // no better than chance; discard and stop

        double alpha;
        bool stop = false;
        if (err <= 0.0) {
            alpha = 1.0;  // perfect stump: keep it and stop boosting
            stop = true;
        } else {
            alpha = std::log((1.0 - err) / err) + log_k1;
        }
        stumps.push_back(std::move(stump));
        alphas.push_back(alpha);

        double staged_miss = 0.0;
        for (size_t i = 0; i < n; ++i) {
            votes.at(i, static_cast<size_t>(pred[i])) += alpha;
            if (argmax_row(votes.row(i), votes.cols) != y[i]) staged_miss += 1.0;
        }
        staged_error.push_back(staged_miss / static_cast<double>(n));
        if (stop) break;

        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            if (pred[i] != y[i]) w[i] *= std::exp(alpha);
            total += w[i];
        }
        for (double& wi : w) wi /= total;
    }

    bool degenerate = stumps.empty();
    std::vector<double> prior(static_cast<size_t>(n_classes), 0.0);
    if (degenerate) {
        for (int c = 0; c < n_classes; ++c) {
            prior[static_cast<size_t>(c)] =
                static_cast<double>(counts[static_cast<size_t>(c)]) / static_cast<double>(n);
        }
    }
    return std::make_unique<AdaBoostModel>(std::move(stumps), std::move(alphas),
                                           std::move(staged_error), std::move(prior),
                                           degenerate, n_classes, X.cols);
}

}  // namespace crimelab
