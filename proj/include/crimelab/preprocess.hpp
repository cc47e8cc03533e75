#pragma once

#include <string>
#include <vector>

#include "crimelab/table.hpp"

namespace crimelab {

/// Per-column min/max fitted on training rows only.
struct NormalizationParams {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<size_t> degenerate_columns;  // min == max
    bool clamp = false;                      // clamp transformed values to [0,1]

    std::string to_json() const;
    static NormalizationParams from_json(const std::string& text);
};

/// Disjoint, covering train/test row sets with per-class proportions within
/// one row of test_fraction.
struct SplitPlan {
    std::vector<size_t> train_indices;
    std::vector<size_t> test_indices;
    double test_fraction = 0.34;
    uint64_t seed = 0;
    std::vector<std::string> warnings;

    std::string to_json() const;
    static SplitPlan from_json(const std::string& text);
};

/// Row -> fold assignment; per-class counts across folds differ by at most 1.
struct FoldPlan {
    int k = 0;
    std::vector<int> assignment;
    uint64_t seed = 0;
    std::vector<std::string> warnings;

    std::vector<size_t> fold_indices(int fold) const;       // rows in the fold
    std::vector<size_t> complement_indices(int fold) const; // rows outside it

    std::string to_json() const;
    static FoldPlan from_json(const std::string& text);
};

/// Seeded Fisher-Yates permutation of the rows (mt19937_64 stream).
FeatureTable shuffle_rows(const FeatureTable& table, uint64_t seed);
std::vector<size_t> shuffled_indices(size_t n, uint64_t seed);

NormalizationParams fit_minmax(const Matrix& train);
NormalizationParams fit_minmax(const FeatureTable& train);

/// nv = (v - min) / (max - min); degenerate columns map to 0.
void apply_minmax_inplace(Matrix& m, const NormalizationParams& params);
Matrix apply_minmax(const Matrix& m, const NormalizationParams& params);
FeatureTable apply_minmax(const FeatureTable& table, const NormalizationParams& params);

/// Proportional per-class allocation; fractional remainders resolved by a
/// seeded largest-remainder draw. Classes with a single row go to train with
/// a warning. Index lists come back sorted.
SplitPlan stratified_holdout_split(const std::vector<int>& y, double test_fraction,
                                   uint64_t seed);

/// Classes in code order, each shuffled with its own derived seed, dealt
/// round-robin through a single global cursor: both fold totals and per-class
/// fold counts stay within 1.
FoldPlan stratified_kfold_plan(const std::vector<int>& y, int k, uint64_t seed);

}  // namespace crimelab
