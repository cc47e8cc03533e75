#include "crimelab/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace crimelab {

namespace {

// Stream tags for derived seeds; distinct per use so streams never overlap.
constexpr uint64_t kSplitClassStream = 0x5704;
constexpr uint64_t kSplitTieStream = 0x71E;
constexpr uint64_t kFoldClassStream = 0xF01D;

std::vector<std::vector<size_t>> rows_by_class(const std::vector<int>& y) {
    int k = infer_n_classes(y);
    std::vector<std::vector<size_t>> rows(static_cast<size_t>(k));
    for (size_t i = 0; i < y.size(); ++i) rows[static_cast<size_t>(y[i])].push_back(i);
    return rows;
}

}  // namespace

std::string NormalizationParams::to_json() const {
    nlohmann::json j;
    j["min"] = min;
    j["max"] = max;
    j["degenerate_columns"] = degenerate_columns;
    j["clamp"] = clamp;
    return j.dump(2);
}

NormalizationParams NormalizationParams::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    NormalizationParams p;
    p.min = j.at("min").get<std::vector<double>>();
    p.max = j.at("max").get<std::vector<double>>();
    p.degenerate_columns = j.value("degenerate_columns", std::vector<size_t>{});
    p.clamp = j.value("clamp", false);
    return p;
}

std::string SplitPlan::to_json() const {
    nlohmann::json j;
    j["train_indices"] = train_indices;
    j["test_indices"] = test_indices;
    j["test_fraction"] = test_fraction;
    j["seed"] = seed;
    j["warnings"] = warnings;
    return j.dump(2);
}

SplitPlan SplitPlan::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SplitPlan p;
    p.train_indices = j.at("train_indices").get<std::vector<size_t>>();
    p.test_indices = j.at("test_indices").get<std::vector<size_t>>();
    p.test_fraction = j.at("test_fraction").get<double>();
    p.seed = j.at("seed").get<uint64_t>();
    p.warnings = j.value("warnings", std::vector<std::string>{});
    return p;
}

std::vector<size_t> FoldPlan::fold_indices(int fold) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<size_t> FoldPlan::complement_indices(int fold) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) out.push_back(i);
    }
    return out;
}

std::string FoldPlan::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["assignment"] = assignment;
    j["seed"] = seed;
    j["warnings"] = warnings;
    return j.dump(2);
}

FoldPlan FoldPlan::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    FoldPlan p;
    p.k = j.at("k").get<int>();
    p.assignment = j.at("assignment").get<std::vector<int>>();
    p.seed = j.at("seed").get<uint64_t>();
    p.warnings = j.value("warnings", std::vector<std::string>{});
    return p;
}

std::vector<size_t> shuffled_indices(size_t n, uint64_t seed) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(seed);
    rng.shuffle(idx);
    return idx;
}

FeatureTable shuffle_rows(const FeatureTable& table, uint64_t seed) {
    return table.select_rows(shuffled_indices(table.n_rows(), seed));
}

NormalizationParams fit_minmax(const Matrix& train) {
    if (train.rows == 0) throw std::invalid_argument("fit_minmax: empty training matrix");
    NormalizationParams p;
    p.min.assign(train.cols, 0.0);
    p.max.assign(train.cols, 0.0);
    for (size_t j = 0; j < train.cols; ++j) {
        double lo = train.at(0, j), hi = train.at(0, j);
        for (size_t r = 1; r < train.rows; ++r) {
            double v = train.at(r, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        p.min[j] = lo;
        p.max[j] = hi;
        if (lo == hi) p.degenerate_columns.push_back(j);
    }
    return p;
}

NormalizationParams fit_minmax(const FeatureTable& train) { return fit_minmax(train.matrix); }

void apply_minmax_inplace(Matrix& m, const NormalizationParams& params) {
    if (params.min.size() != m.cols || params.max.size() != m.cols) {
        throw SchemaError("normalization params fitted on a different column set");
    }
    for (size_t j = 0; j < m.cols; ++j) {
        double lo = params.min[j];
        double range = params.max[j] - lo;
        for (size_t r = 0; r < m.rows; ++r) {
            double& v = m.at(r, j);
            v = range > 0.0 ? (v - lo) / range : 0.0;
            if (params.clamp) v = std::clamp(v, 0.0, 1.0);
        }
    }
}

Matrix apply_minmax(const Matrix& m, const NormalizationParams& params) {
    Matrix out = m;
    apply_minmax_inplace(out, params);
    return out;
}

FeatureTable apply_minmax(const FeatureTable& table, const NormalizationParams& params) {
    FeatureTable out = table;
    apply_minmax_inplace(out.matrix, params);
    return out;
}

SplitPlan stratified_holdout_split(const std::vector<int>& y, double test_fraction,
                                   uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie in (0,1)");
    }
    SplitPlan plan;
    plan.test_fraction = test_fraction;
    plan.seed = seed;

    auto by_class = rows_by_class(y);
    size_t n_classes = by_class.size();

    // Single-row classes cannot be split; they train.
    std::vector<bool> eligible(n_classes, false);
    size_t n_eligible = 0;
    for (size_t c = 0; c < n_classes; ++c) {
        size_t n_c = by_class[c].size();
        if (n_c == 1) {
            plan.warnings.push_back("class " + std::to_string(c) +
                                    " has a single row; assigned to train");
            plan.train_indices.push_back(by_class[c][0]);
        } else if (n_c >= 2) {
            eligible[c] = true;
            n_eligible += n_c;
        }
    }

    // Base allocation per class, then largest-remainder apportionment of the
    // rounding shortfall. The 1e-9 nudge keeps exact products like 0.3*90
    // from flooring one short.
    long long target_total = std::llround(test_fraction * static_cast<double>(n_eligible));
    std::vector<long long> test_count(n_classes, 0);
    std::vector<double> remainder(n_classes, 0.0);
    long long allocated = 0;
    for (size_t c = 0; c < n_classes; ++c) {
        if (!eligible[c]) continue;
        double exact = test_fraction * static_cast<double>(by_class[c].size());
        long long base = static_cast<long long>(std::floor(exact + 1e-9));
        test_count[c] = base;
        remainder[c] = exact - static_cast<double>(base);
        allocated += base;
    }
    if (target_total > allocated) {
        Rng tie_rng(derive_seed(seed, kSplitTieStream));
        std::vector<std::pair<uint64_t, size_t>> order;  // (tie key, class)
        for (size_t c = 0; c < n_classes; ++c) {
            if (eligible[c]) order.emplace_back(tie_rng.next_u64(), c);
        }
        std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
            if (remainder[a.second] != remainder[b.second]) {
                return remainder[a.second] > remainder[b.second];
            }
            return a.first < b.first;
        });
        long long extras = target_total - allocated;
        bool progress = true;
        while (extras > 0 && progress) {
            progress = false;
            for (const auto& [key, c] : order) {
                (void)key;
                if (extras == 0) break;
                // Leave at least one training row per class.
                if (test_count[c] < static_cast<long long>(by_class[c].size()) - 1) {
                    ++test_count[c];
                    --extras;
                    progress = true;
                }
            }
        }
    }

    for (size_t c = 0; c < n_classes; ++c) {
        if (!eligible[c]) continue;
        std::vector<size_t> rows = by_class[c];
        Rng rng(derive_seed(seed, kSplitClassStream + c));
        rng.shuffle(rows);
        size_t n_test = static_cast<size_t>(test_count[c]);
        for (size_t i = 0; i < rows.size(); ++i) {
            (i < n_test ? plan.test_indices : plan.train_indices).push_back(rows[i]);
        }
    }
    std::sort(plan.train_indices.begin(), plan.train_indices.end());
    std::sort(plan.test_indices.begin(), plan.test_indices.end());
    return plan;
}

FoldPlan stratified_kfold_plan(const std::vector<int>& y, int k, uint64_t seed) {
    if (k < 2) throw std::invalid_argument("fold count must be at least 2");
    if (static_cast<size_t>(k) > y.size()) {
        throw std::invalid_argument("fold count exceeds row count");
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(y.size(), -1);

    auto by_class = rows_by_class(y);
    // One cursor across classes keeps total fold sizes balanced while the
    // per-class round robin keeps each class's counts within 1.
    size_t cursor = 0;
    for (size_t c = 0; c < by_class.size(); ++c) {
        auto& rows = by_class[c];
        if (rows.empty()) continue;
        if (rows.size() < static_cast<size_t>(k)) {
            plan.warnings.push_back("class " + std::to_string(c) + " has " +
                                    std::to_string(rows.size()) + " rows for " +
                                    std::to_string(k) + " folds");
        }
        Rng rng(derive_seed(seed, kFoldClassStream + c));
        rng.shuffle(rows);
        for (size_t row : rows) {
            plan.assignment[row] = static_cast<int>(cursor % static_cast<size_t>(k));
            ++cursor;
        }
    }
    return plan;
}

}  // namespace crimelab
