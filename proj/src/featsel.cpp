#include "crimelab/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace crimelab {

FeatureSelectorSpec::Kind selector_kind_from_name(const std::string& name) {
    if (name == "none") return FeatureSelectorSpec::Kind::none;
    if (name == "anova_k_best") return FeatureSelectorSpec::Kind::anova_k_best;
    if (name == "variance_threshold") return FeatureSelectorSpec::Kind::variance_threshold;
    throw ConfigError("unknown feature selector: " + name);
}

std::string selector_kind_name(FeatureSelectorSpec::Kind kind) {
    switch (kind) {
        case FeatureSelectorSpec::Kind::none: return "none";
        case FeatureSelectorSpec::Kind::anova_k_best: return "anova_k_best";
        case FeatureSelectorSpec::Kind::variance_threshold: return "variance_threshold";
    }
    throw ConfigError("unknown feature selector kind");
}

std::vector<double> anova_f_scores(const Matrix& X, const std::vector<int>& y) {
    size_t n = X.rows;
    if (n == 0) throw std::invalid_argument("anova_f_scores: empty input");
    auto counts = class_counts(y);
    size_t groups = 0;
    for (long c : counts) {
        if (c > 0) ++groups;
    }
    if (groups < 2) throw std::invalid_argument("anova_f_scores: needs at least two classes");

    std::vector<double> scores(X.cols, 0.0);
    std::vector<double> class_mean(counts.size());
    for (size_t j = 0; j < X.cols; ++j) {
        double overall = 0.0;
        std::fill(class_mean.begin(), class_mean.end(), 0.0);
        for (size_t i = 0; i < n; ++i) {
            double v = X.at(i, j);
            overall += v;
            class_mean[static_cast<size_t>(y[i])] += v;
        }
        overall /= static_cast<double>(n);
        for (size_t c = 0; c < counts.size(); ++c) {
            if (counts[c] > 0) class_mean[c] /= static_cast<double>(counts[c]);
        }
        double ss_between = 0.0;
        for (size_t c = 0; c < counts.size(); ++c) {
            if (counts[c] > 0) {
                double dev = class_mean[c] - overall;
                ss_between += static_cast<double>(counts[c]) * dev * dev;
            }
        }
        double ss_within = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double dev = X.at(i, j) - class_mean[static_cast<size_t>(y[i])];
            ss_within += dev * dev;
        }
        double ms_between = ss_between / static_cast<double>(groups - 1);
        if (ss_within > 0.0 && n > groups) {
            scores[j] = ms_between / (ss_within / static_cast<double>(n - groups));
        } else if (ms_between > 0.0) {
            scores[j] = std::numeric_limits<double>::infinity();
        } else {
            scores[j] = 0.0;  // constant feature: 0/0 defined as 0
        }
    }
    return scores;
}

std::vector<size_t> select_k_best(const Matrix& X, const std::vector<int>& y, int k) {
    if (k < 1 || static_cast<size_t>(k) > X.cols) {
        throw std::invalid_argument("select_k_best: k must lie in [1, feature count]");
    }
    auto scores = anova_f_scores(X, y);
    std::vector<size_t> order(X.cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    order.resize(static_cast<size_t>(k));
    std::sort(order.begin(), order.end());
    return order;
}

std::vector<size_t> variance_threshold_filter(const Matrix& X, double threshold) {
    if (threshold < 0.0) throw std::invalid_argument("variance threshold must be >= 0");
    if (X.rows == 0) throw std::invalid_argument("variance_threshold_filter: empty input");
    std::vector<size_t> keep;
    for (size_t j = 0; j < X.cols; ++j) {
        double mean = 0.0;
        for (size_t i = 0; i < X.rows; ++i) mean += X.at(i, j);
        mean /= static_cast<double>(X.rows);
        double ss = 0.0;
        for (size_t i = 0; i < X.rows; ++i) {
            double dev = X.at(i, j) - mean;
            ss += dev * dev;
        }
        double variance = ss / static_cast<double>(X.rows);  // population variance
        if (variance > threshold) keep.push_back(j);
    }
    if (keep.empty()) {
        throw DataError("variance threshold " + std::to_string(threshold) +
                        " removed every column");
    }
    return keep;
}

std::vector<size_t> select_features(const FeatureSelectorSpec& spec, const Matrix& X,
                                    const std::vector<int>& y) {
    switch (spec.kind) {
        case FeatureSelectorSpec::Kind::none: {
            std::vector<size_t> all(X.cols);
            std::iota(all.begin(), all.end(), 0);
            return all;
        }
        case FeatureSelectorSpec::Kind::anova_k_best:
            return select_k_best(X, y, spec.k);
        case FeatureSelectorSpec::Kind::variance_threshold:
            return variance_threshold_filter(X, spec.threshold);
    }
    throw ConfigError("unknown feature selector kind");
}

}  // namespace crimelab
