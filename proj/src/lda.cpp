#include "crimelab/lda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crimelab/linalg.hpp"

namespace crimelab {

Matrix LdaModel::decision_scores(const Matrix& X) const {
    check_features(X);
    size_t r = projection_.cols;
    Matrix scores(X.rows, static_cast<size_t>(n_classes_),
                  -std::numeric_limits<double>::infinity());
    parallel_for(X.rows, threads_, [&](size_t i) {
        std::vector<double> xt(r, 0.0);
        const double* x = X.row(i);
        for (size_t j = 0; j < mean_.size(); ++j) {
            double centered = x[j] - mean_[j];
            if (centered == 0.0) continue;
            const double* prow = projection_.row(j);
            for (size_t m = 0; m < r; ++m) xt[m] += centered * prow[m];
        }
        double* out = scores.row(i);
        for (int c = 0; c < n_classes_; ++c) {
            if (!present_[static_cast<size_t>(c)]) continue;
            const double* mc = class_means_proj_.row(static_cast<size_t>(c));
            double dot = 0.0;
            for (size_t m = 0; m < r; ++m) dot += xt[m] * mc[m];
            out[c] = dot + class_bias_[static_cast<size_t>(c)];
        }
    });
    return scores;
}

Matrix LdaModel::predict_proba(const Matrix& X) const {
    Matrix scores = decision_scores(X);
    for (size_t i = 0; i < scores.rows; ++i) {
        double* row = scores.row(i);
        double peak = -std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < scores.cols; ++c) peak = std::max(peak, row[c]);
        double total = 0.0;
        for (size_t c = 0; c < scores.cols; ++c) {
            row[c] = std::isinf(row[c]) ? 0.0 : std::exp(row[c] - peak);
            total += row[c];
        }
        for (size_t c = 0; c < scores.cols; ++c) row[c] /= total;
    }
    return scores;
}

std::unique_ptr<LdaModel> train_lda(const Matrix& X, const std::vector<int>& y,
                                    int n_classes, const ModelSpec& spec) {
    size_t n = X.rows, d = X.cols;
    if (n == 0) throw std::invalid_argument("train_lda: empty input");
    auto counts = class_counts(y, n_classes);
    size_t groups = 0;
    for (long c : counts) {
        if (c > 0) ++groups;
        if (c == 1) {
            throw std::invalid_argument(
                "train_lda: every class needs at least 2 rows to estimate scatter");
        }
    }
    if (groups < 2) throw std::invalid_argument("train_lda: needs at least two classes");
    if (n <= groups) throw std::invalid_argument("train_lda: more classes than spare rows");

    std::vector<double> mean(d, 0.0);
    Matrix class_means(static_cast<size_t>(n_classes), d);
    for (size_t i = 0; i < n; ++i) {
        const double* x = X.row(i);
        double* cm = class_means.row(static_cast<size_t>(y[i]));
        for (size_t j = 0; j < d; ++j) {
            mean[j] += x[j];
            cm[j] += x[j];
        }
    }
    for (size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
    for (int c = 0; c < n_classes; ++c) {
        if (counts[static_cast<size_t>(c)] == 0) continue;
        double* cm = class_means.row(static_cast<size_t>(c));
        for (size_t j = 0; j < d; ++j) {
            cm[j] /= static_cast<double>(counts[static_cast<size_t>(c)]);
        }
    }

    // Centered within-class matrix; its scaled singular values give the
    // within-class covariance spectrum.
    Matrix centered(n, d);
    for (size_t i = 0; i < n; ++i) {
        const double* x = X.row(i);
        const double* cm = class_means.row(static_cast<size_t>(y[i]));
        double* w = centered.row(i);
        for (size_t j = 0; j < d; ++j) w[j] = x[j] - cm[j];
    }
    Matrix r_factor = qr_r(centered);
    std::vector<double> sv;
    Matrix v;
    jacobi_svd(r_factor, sv, v);
    double scale = 1.0 / std::sqrt(static_cast<double>(n - groups));
    for (double& s : sv) s *= scale;

    double cutoff = sv.empty() ? 0.0 : spec.lda_tol * sv[0];
    size_t rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff && sv[rank] > 0.0) ++rank;

    Matrix projection(d, rank);
    for (size_t j = 0; j < d; ++j) {
        for (size_t m = 0; m < rank; ++m) projection.at(j, m) = v.at(j, m) / sv[m];
    }

    Matrix class_means_proj(static_cast<size_t>(n_classes), rank);
    std::vector<double> bias(static_cast<size_t>(n_classes), 0.0);
    std::vector<char> present(static_cast<size_t>(n_classes), 0);
    for (int c = 0; c < n_classes; ++c) {
        if (counts[static_cast<size_t>(c)] == 0) continue;
        present[static_cast<size_t>(c)] = 1;
        const double* cm = class_means.row(static_cast<size_t>(c));
        double* mp = class_means_proj.row(static_cast<size_t>(c));
        for (size_t m = 0; m < rank; ++m) {
            double acc = 0.0;
            for (size_t j = 0; j < d; ++j) acc += (cm[j] - mean[j]) * projection.at(j, m);
            mp[m] = acc;
        }
        double norm2 = 0.0;
        for (size_t m = 0; m < rank; ++m) norm2 += mp[m] * mp[m];
        double prior = static_cast<double>(counts[static_cast<size_t>(c)]) /
                       static_cast<double>(n);
        bias[static_cast<size_t>(c)] = -0.5 * norm2 + std::log(prior);
    }

    return std::make_unique<LdaModel>(std::move(mean), std::move(projection),
                                      std::move(class_means_proj), std::move(bias),
                                      std::move(present), n_classes);
}

}  // namespace crimelab
