#pragma once

#include <string>
#include <vector>

#include "crimelab/common.hpp"

namespace crimelab {

struct FeatureSelectorSpec {
    enum class Kind { none, anova_k_best, variance_threshold };
    Kind kind = Kind::none;
    int k = 10;                // anova_k_best
    double threshold = 0.16;   // variance_threshold, 0.8 * (1 - 0.8)
};

FeatureSelectorSpec::Kind selector_kind_from_name(const std::string& name);
std::string selector_kind_name(FeatureSelectorSpec::Kind kind);

/// One-way ANOVA F statistic per feature: between-class mean square over
/// within-class mean square. Constant feature -> 0; zero within-class
/// variance with class means apart -> +infinity.
std::vector<double> anova_f_scores(const Matrix& X, const std::vector<int>& y);

/// Column indices of the k largest F scores, ascending (original column
/// order); F ties break toward the lower index.
std::vector<size_t> select_k_best(const Matrix& X, const std::vector<int>& y, int k);

/// Columns whose population variance exceeds the threshold (strict),
/// ascending. Dropping everything is an error.
std::vector<size_t> variance_threshold_filter(const Matrix& X, double threshold);

/// Columns the spec keeps, ascending; kind none keeps all.
std::vector<size_t> select_features(const FeatureSelectorSpec& spec, const Matrix& X,
                                    const std::vector<int>& y);

}  // namespace crimelab
