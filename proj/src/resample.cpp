#include "crimelab/resample.hpp"

#include <algorithm>

namespace crimelab {

namespace {

constexpr uint64_t kOverStream = 0x0A00;
constexpr uint64_t kUnderStream = 0x0B00;
constexpr uint64_t kSmoteStream = 0x0500;

std::vector<std::vector<size_t>> rows_by_class(const std::vector<int>& y) {
    int k = infer_n_classes(y);
    std::vector<std::vector<size_t>> rows(static_cast<size_t>(k));
    for (size_t i = 0; i < y.size(); ++i) rows[static_cast<size_t>(y[i])].push_back(i);
    return rows;
}

long max_count(const std::vector<std::vector<size_t>>& by_class) {
    long m = 0;
    for (const auto& rows : by_class) m = std::max(m, static_cast<long>(rows.size()));
    return m;
}

void append_row(Matrix& X, const double* src) {
    X.data.insert(X.data.end(), src, src + X.cols);
    ++X.rows;
}

}  // namespace

SamplerSpec::Kind sampler_kind_from_name(const std::string& name) {
    if (name == "none") return SamplerSpec::Kind::none;
    if (name == "random_over") return SamplerSpec::Kind::random_over;
    if (name == "random_under") return SamplerSpec::Kind::random_under;
    if (name == "smote") return SamplerSpec::Kind::smote;
    if (name == "tomek_links") return SamplerSpec::Kind::tomek_links;
    if (name == "smote_tomek") return SamplerSpec::Kind::smote_tomek;
    throw ConfigError("unknown sampler: " + name);
}

std::string sampler_kind_name(SamplerSpec::Kind kind) {
    switch (kind) {
        case SamplerSpec::Kind::none: return "none";
        case SamplerSpec::Kind::random_over: return "random_over";
        case SamplerSpec::Kind::random_under: return "random_under";
        case SamplerSpec::Kind::smote: return "smote";
        case SamplerSpec::Kind::tomek_links: return "tomek_links";
        case SamplerSpec::Kind::smote_tomek: return "smote_tomek";
    }
    throw ConfigError("unknown sampler kind");
}

std::vector<std::vector<size_t>> knn_indices(const Matrix& X, size_t k) {
    size_t n = X.rows;
    std::vector<std::vector<size_t>> out(n);
    if (n < 2) return out;
    size_t k_eff = std::min(k, n - 1);
    for (size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, size_t>> cand;
        cand.reserve(n - 1);
        const double* xi = X.row(i);
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            cand.emplace_back(squared_distance(xi, X.row(j), X.cols), j);
        }
        // Pair order = (distance, index): equidistant neighbors resolve to
        // the lower row index.
        std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(k_eff), cand.end());
        out[i].reserve(k_eff);
        for (size_t m = 0; m < k_eff; ++m) out[i].push_back(cand[m].second);
    }
    return out;
}

ResampleResult random_oversample(const Matrix& X, const std::vector<int>& y, uint64_t seed) {
    if (X.rows == 0) throw std::invalid_argument("random_oversample: empty input");
    auto by_class = rows_by_class(y);
    long majority = max_count(by_class);

    ResampleResult res{X, y, {}};
    for (size_t c = 0; c < by_class.size(); ++c) {
        const auto& rows = by_class[c];
        if (rows.empty()) continue;
        Rng rng(derive_seed(seed, kOverStream + c));
        for (long need = majority - static_cast<long>(rows.size()); need > 0; --need) {
            size_t src = rows[rng.index(rows.size())];
            append_row(res.X, X.row(src));
            res.y.push_back(static_cast<int>(c));
        }
    }
    return res;
}

ResampleResult random_undersample(const Matrix& X, const std::vector<int>& y, uint64_t seed) {
    if (X.rows == 0) throw std::invalid_argument("random_undersample: empty input");
    auto by_class = rows_by_class(y);
    long minority = -1;
    for (const auto& rows : by_class) {
        if (!rows.empty() &&
            (minority < 0 || static_cast<long>(rows.size()) < minority)) {
            minority = static_cast<long>(rows.size());
        }
    }
    std::vector<size_t> keep;
    for (size_t c = 0; c < by_class.size(); ++c) {
        auto rows = by_class[c];
        if (rows.empty()) continue;
        Rng rng(derive_seed(seed, kUnderStream + c));
        rng.shuffle(rows);
        rows.resize(static_cast<size_t>(minority));
        keep.insert(keep.end(), rows.begin(), rows.end());
    }
    std::sort(keep.begin(), keep.end());
    return ResampleResult{take_rows(X, keep), take(y, keep), {}};
}

ResampleResult smote(const Matrix& X, const std::vector<int>& y, int k, uint64_t seed) {
    if (X.rows == 0) throw std::invalid_argument("smote: empty input");
    if (k < 1) throw std::invalid_argument("smote: k must be at least 1");
    auto by_class = rows_by_class(y);
    long majority = max_count(by_class);

    ResampleResult res{X, y, {}};
    for (size_t c = 0; c < by_class.size(); ++c) {
        const auto& rows = by_class[c];
        long need = majority - static_cast<long>(rows.size());
        if (rows.empty() || need <= 0) continue;

        if (rows.size() == 1) {
            res.warnings.push_back("class " + std::to_string(c) +
                                   " has one row; duplicated instead of interpolated");
            for (long g = 0; g < need; ++g) {
                append_row(res.X, X.row(rows[0]));
                res.y.push_back(static_cast<int>(c));
            }
            continue;
        }

        Matrix class_rows = take_rows(X, rows);
        size_t k_eff = std::min<size_t>(static_cast<size_t>(k), rows.size() - 1);
        auto neighbors = knn_indices(class_rows, k_eff);

        Rng rng(derive_seed(seed, kSmoteStream + c));
        std::vector<double> synth(X.cols);
        for (long g = 0; g < need; ++g) {
            size_t base = static_cast<size_t>(g) % rows.size();
            size_t nb = neighbors[base][rng.index(k_eff)];
            double lambda = rng.unit();
            const double* xi = class_rows.row(base);
            const double* xn = class_rows.row(nb);
            for (size_t j = 0; j < X.cols; ++j) synth[j] = xi[j] + lambda * (xn[j] - xi[j]);
            append_row(res.X, synth.data());
            res.y.push_back(static_cast<int>(c));
        }
    }
    return res;
}

ResampleResult tomek_links(const Matrix& X, const std::vector<int>& y) {
    if (X.rows < 2) return ResampleResult{X, y, {}};
    auto by_class = rows_by_class(y);
    long majority_count = max_count(by_class);
    int majority_class = -1;
    int classes_at_max = 0;
    for (size_t c = 0; c < by_class.size(); ++c) {
        if (static_cast<long>(by_class[c].size()) == majority_count) {
            ++classes_at_max;
            majority_class = static_cast<int>(c);
        }
    }
    bool unique_majority = classes_at_max == 1;

    auto nn = knn_indices(X, 1);
    std::vector<bool> removed(X.rows, false);
    for (size_t i = 0; i < X.rows; ++i) {
        size_t j = nn[i][0];
        if (j <= i) continue;  // each mutual pair is visited from its lower index
        if (nn[j][0] != i || y[i] == y[j]) continue;
        if (unique_majority) {
            if (y[i] == majority_class) removed[i] = true;
            if (y[j] == majority_class) removed[j] = true;
        } else {
            removed[i] = removed[j] = true;
        }
    }
    std::vector<size_t> keep;
    for (size_t i = 0; i < X.rows; ++i) {
        if (!removed[i]) keep.push_back(i);
    }
    return ResampleResult{take_rows(X, keep), take(y, keep), {}};
}

ResampleResult smote_tomek(const Matrix& X, const std::vector<int>& y, int k, uint64_t seed) {
    ResampleResult oversampled = smote(X, y, k, seed);
    ResampleResult res = tomek_links(oversampled.X, oversampled.y);
    res.warnings.insert(res.warnings.begin(), oversampled.warnings.begin(),
                        oversampled.warnings.end());
    return res;
}

ResampleResult apply_sampler(const SamplerSpec& spec, const Matrix& X,
                             const std::vector<int>& y) {
    switch (spec.kind) {
        case SamplerSpec::Kind::none: return ResampleResult{X, y, {}};
        case SamplerSpec::Kind::random_over: return random_oversample(X, y, spec.seed);
        case SamplerSpec::Kind::random_under: return random_undersample(X, y, spec.seed);
        case SamplerSpec::Kind::smote: return smote(X, y, spec.smote_k, spec.seed);
        case SamplerSpec::Kind::tomek_links: return tomek_links(X, y);
        case SamplerSpec::Kind::smote_tomek:
            return smote_tomek(X, y, spec.smote_k, spec.seed);
    }
    throw ConfigError("unknown sampler kind");
}

}  // namespace crimelab
