#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace crimelab {

// Bad run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or inconsistent input data (CLI exit code 3).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input violates the expected schema (column set, class set, shape).
struct SchemaError : DataError {
    using DataError::DataError;
};

/// Seedable generator used everywhere randomness is needed.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard, and the int/real derivations below are our own, so identical
/// seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Unbiased draw from [0, n). n must be > 0.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (-n) % n;  // 2^64 mod n
        uint64_t x;
        do {
            x = next_u64();
        } while (x < threshold);
        return x % n;
    }

    size_t index(size_t n) { return static_cast<size_t>(below(n)); }

    /// Uniform double in [0, 1), 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (always consumes two draws).
    double normal();

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

/// Deterministic sub-seed for a named stream of a master seed (splitmix64
/// mixing). Every parallel unit (tree, fold, bag, class) draws from its own
/// derived stream so results never depend on scheduling.
uint64_t derive_seed(uint64_t master, uint64_t stream);

/// Runs fn(0..n-1) on up to `threads` workers. Callers must write results
/// into per-index slots; aggregation stays with the caller, in index order.
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn);

/// Row-major dense matrix of doubles.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(size_t r, size_t c) { return data[r * cols + c]; }
    double at(size_t r, size_t c) const { return data[r * cols + c]; }
    double* row(size_t r) { return data.data() + r * cols; }
    const double* row(size_t r) const { return data.data() + r * cols; }

    bool operator==(const Matrix& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
};

/// Copies the given rows (in the given order) into a new matrix.
Matrix take_rows(const Matrix& m, const std::vector<size_t>& rows);

/// Copies the given columns (in the given order) into a new matrix.
Matrix take_cols(const Matrix& m, const std::vector<size_t>& cols);

template <typename T>
std::vector<T> take(const std::vector<T>& v, const std::vector<size_t>& idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (size_t i : idx) out.push_back(v[i]);
    return out;
}

std::string trim(const std::string& s);
std::string to_lower(const std::string& s);

/// Integers print bare, everything else with round-trip precision.
std::string format_compact(double v);

/// Full-string double parse; rejects trailing junk, infinities and NaN.
bool parse_double(const std::string& s, double& out);

/// Class occurrence counts; K = max(label)+1 when not given.
std::vector<long> class_counts(const std::vector<int>& y, int n_classes = -1);

int infer_n_classes(const std::vector<int>& y);

double squared_distance(const double* a, const double* b, size_t d);

}  // namespace crimelab
