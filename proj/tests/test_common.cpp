#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>

#include "crimelab/common.hpp"
#include "helpers.hpp"

using namespace crimelab;

TEST_CASE("rng streams are reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(43);
    CHECK(Rng(42).next_u64() != c.next_u64());
}

TEST_CASE("rng unit stays in [0,1)") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("rng below respects the bound and reaches every value") {
    Rng rng(11);
    CHECK(rng.below(1) == 0);
    std::set<uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        uint64_t v = rng.below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("shuffle is a seeded permutation") {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    std::vector<int> w = v;
    Rng r1(5), r2(5);
    r1.shuffle(v);
    r2.shuffle(w);
    CHECK(v == w);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(50);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(sorted == expect);
    CHECK(v != expect);  // 50 elements: identity is effectively impossible
}

TEST_CASE("derive_seed separates streams") {
    std::set<uint64_t> seeds;
    for (uint64_t s = 0; s < 100; ++s) seeds.insert(derive_seed(1234, s));
    CHECK(seeds.size() == 100);
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("normal draws have plausible moments") {
    Rng rng(99);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.05);
    CHECK(std::fabs(var - 1.0) < 0.1);
}

TEST_CASE("parallel_for fills slots identically for any worker count") {
    const size_t n = 1000;
    std::vector<uint64_t> one(n), four(n);
    auto fill = [](std::vector<uint64_t>& out) {
        return [&out](size_t i) { out[i] = derive_seed(77, i); };
    };
    parallel_for(n, 1, fill(one));
    parallel_for(n, 4, fill(four));
    CHECK(one == four);
}

TEST_CASE("parallel_for propagates worker exceptions") {
    CHECK_THROWS_AS(parallel_for(16, 4,
                                 [](size_t i) {
                                     if (i == 9) throw DataError("boom");
                                 }),
                    DataError);
}

TEST_CASE("take_rows and take_cols copy in order") {
    Matrix m(3, 2);
    double v = 0;
    for (double& x : m.data) x = v++;
    Matrix r = take_rows(m, {2, 0});
    CHECK(r.rows == 2);
    CHECK(r.at(0, 0) == 4.0);
    CHECK(r.at(0, 1) == 5.0);
    CHECK(r.at(1, 0) == 0.0);
    Matrix c = take_cols(m, {1});
    CHECK(c.cols == 1);
    CHECK(c.at(0, 0) == 1.0);
    CHECK(c.at(2, 0) == 5.0);
    std::vector<int> y = {10, 20, 30};
    CHECK(take(y, {2, 2, 0}) == std::vector<int>{30, 30, 10});
}

TEST_CASE("format_compact prints integers bare and doubles round-trip") {
    CHECK(format_compact(3.0) == "3");
    CHECK(format_compact(-17.0) == "-17");
    CHECK(format_compact(0.0) == "0");
    CHECK(format_compact(3.5) == "3.5");
    double v = 0.1 + 0.2;
    CHECK(std::stod(format_compact(v)) == v);
}

TEST_CASE("string utilities") {
    CHECK(trim("  a b \r\n") == "a b");
    CHECK(trim("\t") == "");
    CHECK(to_lower("AbC-1") == "abc-1");
    double out = 0;
    CHECK(parse_double("3.25", out));
    CHECK(out == 3.25);
    CHECK_FALSE(parse_double("", out));
    CHECK_FALSE(parse_double("3.25x", out));
    CHECK_FALSE(parse_double("nan", out));
    CHECK_FALSE(parse_double("inf", out));
}

TEST_CASE("class_counts and inference") {
    std::vector<int> y = {0, 2, 2, 1};
    CHECK(infer_n_classes(y) == 3);
    CHECK(class_counts(y) == std::vector<long>{1, 1, 2});
    CHECK(class_counts(y, 5) == std::vector<long>{1, 1, 2, 0, 0});
    CHECK_THROWS_AS(class_counts(y, 2), DataError);
    CHECK_THROWS_AS(infer_n_classes(std::vector<int>{0, -1}), DataError);
}

TEST_CASE("squared_distance") {
    double a[] = {0.0, 3.0};
    double b[] = {4.0, 0.0};
    CHECK(squared_distance(a, b, 2) == 25.0);
}
