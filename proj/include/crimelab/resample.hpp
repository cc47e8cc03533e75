#pragma once

#include <string>
#include <vector>

#include "crimelab/common.hpp"

namespace crimelab {

struct SamplerSpec {
    enum class Kind { none, random_over, random_under, smote, tomek_links, smote_tomek };
    Kind kind = Kind::none;
    int smote_k = 5;
    uint64_t seed = 0;
};

SamplerSpec::Kind sampler_kind_from_name(const std::string& name);
std::string sampler_kind_name(SamplerSpec::Kind kind);

struct ResampleResult {
    Matrix X;
    std::vector<int> y;
    std::vector<std::string> warnings;
};

/// Every class brought up to the majority count. Originals keep their order;
/// duplicates (seeded draws with replacement) are appended grouped by class.
ResampleResult random_oversample(const Matrix& X, const std::vector<int>& y, uint64_t seed);

/// Every class cut down to the minority count; survivors are a seeded subset
/// in original row order.
ResampleResult random_undersample(const Matrix& X, const std::vector<int>& y, uint64_t seed);

/// Synthetic minority rows x_i + lambda * (x_nn - x_i), lambda in [0,1),
/// with x_nn drawn from x_i's k nearest same-class neighbors. Appended rows
/// are grouped by class code, then generation index; generation g interpolates
/// from base row g mod n_c, so a fixed seed replays exactly. Single-row
/// classes fall back to duplication with a warning.
ResampleResult smote(const Matrix& X, const std::vector<int>& y, int k, uint64_t seed);

/// Removes Tomek links: cross-class pairs that are mutual nearest neighbors.
/// With a unique majority class, only its endpoints are removed; when the top
/// counts tie, both endpoints of every link go. Single pass.
ResampleResult tomek_links(const Matrix& X, const std::vector<int>& y);

/// smote followed by tomek_links (after SMOTE all counts tie, so both ends of
/// every link are removed).
ResampleResult smote_tomek(const Matrix& X, const std::vector<int>& y, int k, uint64_t seed);

ResampleResult apply_sampler(const SamplerSpec& spec, const Matrix& X,
                             const std::vector<int>& y);

/// k nearest same-set neighbors of each row (self excluded), nearest first;
/// distance ties break toward the lower row index.
std::vector<std::vector<size_t>> knn_indices(const Matrix& X, size_t k);

}  // namespace crimelab
