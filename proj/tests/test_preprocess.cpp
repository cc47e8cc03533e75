#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "crimelab/preprocess.hpp"
#include "helpers.hpp"

using namespace crimelab;

namespace {

FeatureTable tiny_table(size_t n, size_t d, int k, uint64_t seed) {
    FeatureTable t;
    Rng rng(seed);
    t.matrix = testutil::random_matrix(rng, n, d);
    t.labels = testutil::random_labels(rng, n, k);
    for (size_t j = 0; j < d; ++j) {
        t.column_names.push_back("f" + std::to_string(j));
        t.column_kinds.push_back(ColumnKind::numeric);
    }
    for (int c = 0; c < k; ++c) t.class_names.push_back("c" + std::to_string(c));
    return t;
}

}  // namespace

TEST_CASE("shuffle_rows permutes rows and labels together, deterministically") {
    FeatureTable t = tiny_table(40, 3, 4, 9);
    FeatureTable s1 = shuffle_rows(t, 123);
    FeatureTable s2 = shuffle_rows(t, 123);
    CHECK(s1.matrix == s2.matrix);
    CHECK(s1.labels == s2.labels);
    CHECK(shuffle_rows(t, 124).labels != s1.labels);

    // every original (row, label) pair appears exactly once
    std::multiset<double> orig, shuf;
    for (size_t r = 0; r < t.n_rows(); ++r) {
        orig.insert(t.matrix.at(r, 0) + 1000.0 * t.labels[r]);
        shuf.insert(s1.matrix.at(r, 0) + 1000.0 * s1.labels[r]);
    }
    CHECK(orig == shuf);

    std::vector<size_t> idx = shuffled_indices(t.n_rows(), 123);
    for (size_t r = 0; r < t.n_rows(); ++r) {
        CHECK(s1.matrix.at(r, 1) == t.matrix.at(idx[r], 1));
    }
}

TEST_CASE("min-max maps training columns onto [0,1] with endpoints attained") {
    Rng rng(4);
    Matrix X = testutil::random_matrix(rng, 50, 4, -3.0, 7.0);
    for (size_t r = 0; r < X.rows; ++r) X.at(r, 2) = 42.0;  // constant column
    NormalizationParams p = fit_minmax(X);
    Matrix N = apply_minmax(X, p);
    for (size_t j = 0; j < 4; ++j) {
        double lo = 1e9, hi = -1e9;
        for (size_t r = 0; r < N.rows; ++r) {
            lo = std::min(lo, N.at(r, j));
            hi = std::max(hi, N.at(r, j));
        }
        if (j == 2) {
            CHECK(lo == 0.0);
            CHECK(hi == 0.0);
        } else {
            CHECK(lo == 0.0);
            CHECK(hi == 1.0);
        }
    }
    CHECK(p.degenerate_columns == std::vector<size_t>{2});
}

TEST_CASE("normalization of unseen rows extrapolates unless clamped") {
    Matrix train(2, 1);
    train.at(0, 0) = 0.0;
    train.at(1, 0) = 10.0;
    NormalizationParams p = fit_minmax(train);
    Matrix test(2, 1);
    test.at(0, 0) = -5.0;
    test.at(1, 0) = 15.0;
    Matrix plain = apply_minmax(test, p);
    CHECK(plain.at(0, 0) == -0.5);
    CHECK(plain.at(1, 0) == 1.5);
    p.clamp = true;
    Matrix clamped = apply_minmax(test, p);
    CHECK(clamped.at(0, 0) == 0.0);
    CHECK(clamped.at(1, 0) == 1.0);
}

TEST_CASE("normalization params round-trip through json") {
    Matrix train(3, 2);
    train.at(0, 0) = 1.0;
    train.at(1, 0) = 3.0;
    train.at(2, 0) = 2.0;
    train.at(0, 1) = 5.0;
    train.at(1, 1) = 5.0;
    train.at(2, 1) = 5.0;
    NormalizationParams p = fit_minmax(train);
    p.clamp = true;
    NormalizationParams back = NormalizationParams::from_json(p.to_json());
    CHECK(back.min == p.min);
    CHECK(back.max == p.max);
    CHECK(back.degenerate_columns == p.degenerate_columns);
    CHECK(back.clamp == p.clamp);
}

TEST_CASE("stratified holdout: disjoint cover, proportional within one row") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        int k = 2 + static_cast<int>(rng.index(6));
        size_t n = 50 + rng.index(200);
        std::vector<int> y = testutil::random_labels(rng, n, k);
        double frac = 0.1 + 0.5 * rng.unit();
        SplitPlan plan = stratified_holdout_split(y, frac, rng.next_u64());

        std::vector<char> seen(n, 0);
        for (size_t i : plan.train_indices) seen[i] += 1;
        for (size_t i : plan.test_indices) seen[i] += 1;
        for (char c : seen) CHECK(c == 1);

        std::vector<long> total = class_counts(y, k);
        std::vector<long> test_counts(static_cast<size_t>(k), 0);
        for (size_t i : plan.test_indices) ++test_counts[static_cast<size_t>(y[i])];
        for (int c = 0; c < k; ++c) {
            double target = frac * static_cast<double>(total[static_cast<size_t>(c)]);
            CHECK(std::fabs(static_cast<double>(test_counts[static_cast<size_t>(c)]) - target) <=
                  1.0);
        }
        CHECK(std::is_sorted(plan.train_indices.begin(), plan.train_indices.end()));
        CHECK(std::is_sorted(plan.test_indices.begin(), plan.test_indices.end()));
    }
}

TEST_CASE("holdout sends single-row classes to train with a warning") {
    std::vector<int> y = {0, 0, 0, 0, 0, 0, 0, 0, 1};
    SplitPlan plan = stratified_holdout_split(y, 0.3, 5);
    bool in_train = std::count(plan.train_indices.begin(), plan.train_indices.end(), 8) == 1;
    CHECK(in_train);
    CHECK_FALSE(plan.warnings.empty());
}

TEST_CASE("holdout split is deterministic in the seed") {
    std::vector<int> y = testutil::random_labels(*new Rng(3), 200, 4);  // intentional leak-free? no
    SplitPlan a = stratified_holdout_split(y, 0.25, 77);
    SplitPlan b = stratified_holdout_split(y, 0.25, 77);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.test_indices == b.test_indices);
    SplitPlan c = stratified_holdout_split(y, 0.25, 78);
    CHECK(a.test_indices != c.test_indices);
}

TEST_CASE("stratified k-fold: per-class and total fold sizes within one") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        int k = 2 + static_cast<int>(rng.index(9));
        int classes = 2 + static_cast<int>(rng.index(6));
        size_t n = static_cast<size_t>(k) * 3 + rng.index(300);
        std::vector<int> y = testutil::random_labels(rng, n, classes);
        FoldPlan plan = stratified_kfold_plan(y, k, rng.next_u64());
        REQUIRE(plan.assignment.size() == n);

        std::vector<long> fold_total(static_cast<size_t>(k), 0);
        std::vector<std::vector<long>> fold_class(
            static_cast<size_t>(k), std::vector<long>(static_cast<size_t>(classes), 0));
        for (size_t i = 0; i < n; ++i) {
            int f = plan.assignment[i];
            REQUIRE(f >= 0);
            REQUIRE(f < k);
            ++fold_total[static_cast<size_t>(f)];
            ++fold_class[static_cast<size_t>(f)][static_cast<size_t>(y[i])];
        }
        auto [tmin, tmax] = std::minmax_element(fold_total.begin(), fold_total.end());
        CHECK(*tmax - *tmin <= 1);
        for (int c = 0; c < classes; ++c) {
            long lo = 1L << 40, hi = -1;
            for (int f = 0; f < k; ++f) {
                lo = std::min(lo, fold_class[static_cast<size_t>(f)][static_cast<size_t>(c)]);
                hi = std::max(hi, fold_class[static_cast<size_t>(f)][static_cast<size_t>(c)]);
            }
            CHECK(hi - lo <= 1);
        }
    }
}

TEST_CASE("fold index helpers agree with the assignment") {
    std::vector<int> y = testutil::random_labels(*new Rng(31), 101, 3);
    FoldPlan plan = stratified_kfold_plan(y, 10, 55);
    std::set<size_t> all;
    for (int f = 0; f < plan.k; ++f) {
        std::vector<size_t> inside = plan.fold_indices(f);
        std::vector<size_t> outside = plan.complement_indices(f);
        CHECK(inside.size() + outside.size() == y.size());
        for (size_t i : inside) {
            CHECK(plan.assignment[i] == f);
            all.insert(i);
        }
        for (size_t i : outside) CHECK(plan.assignment[i] != f);
        CHECK(std::is_sorted(inside.begin(), inside.end()));
        CHECK(std::is_sorted(outside.begin(), outside.end()));
    }
    CHECK(all.size() == y.size());
}

TEST_CASE("plans round-trip through json") {
    std::vector<int> y = testutil::random_labels(*new Rng(8), 60, 3);
    SplitPlan split = stratified_holdout_split(y, 0.34, 999);
    SplitPlan split_back = SplitPlan::from_json(split.to_json());
    CHECK(split_back.train_indices == split.train_indices);
    CHECK(split_back.test_indices == split.test_indices);
    CHECK(split_back.test_fraction == split.test_fraction);
    CHECK(split_back.seed == split.seed);

    FoldPlan fold = stratified_kfold_plan(y, 5, 1000);
    FoldPlan fold_back = FoldPlan::from_json(fold.to_json());
    CHECK(fold_back.k == fold.k);
    CHECK(fold_back.assignment == fold.assignment);
    CHECK(fold_back.seed == fold.seed);
}
