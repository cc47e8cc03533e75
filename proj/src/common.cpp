#include "crimelab/common.hpp"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

namespace crimelab {

double Rng::normal() {
    // Box-Muller, cosine branch only, so the draw count per call is fixed.
    double u1 = unit();
    double u2 = unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

uint64_t derive_seed(uint64_t master, uint64_t stream) {
    // splitmix64 finalizer over the combined value; bijective mixing keeps
    // distinct (master, stream) pairs from colliding in practice.
    uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
    if (n == 0) return;
    size_t workers = threads > 0 ? static_cast<size_t>(threads) : 1;
    if (workers > n) workers = n;
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

Matrix take_rows(const Matrix& m, const std::vector<size_t>& rows) {
    Matrix out(rows.size(), m.cols);
    for (size_t i = 0; i < rows.size(); ++i) {
        const double* src = m.row(rows[i]);
        std::copy(src, src + m.cols, out.row(i));
    }
    return out;
}

Matrix take_cols(const Matrix& m, const std::vector<size_t>& cols) {
    Matrix out(m.rows, cols.size());
    for (size_t r = 0; r < m.rows; ++r) {
        const double* src = m.row(r);
        double* dst = out.row(r);
        for (size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
    }
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string to_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string format_compact(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        std::ostringstream os;
        os << static_cast<long long>(v);
        return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return false;
    out = v;
    return true;
}

std::vector<long> class_counts(const std::vector<int>& y, int n_classes) {
    int k = n_classes >= 0 ? n_classes : infer_n_classes(y);
    std::vector<long> counts(static_cast<size_t>(k), 0);
    for (int label : y) {
        if (label < 0 || label >= k) throw DataError("label out of range: " + std::to_string(label));
        ++counts[static_cast<size_t>(label)];
    }
    return counts;
}

int infer_n_classes(const std::vector<int>& y) {
    int k = 0;
    for (int label : y) {
        if (label < 0) throw DataError("negative label");
        if (label + 1 > k) k = label + 1;
    }
    return k;
}

double squared_distance(const double* a, const double* b, size_t d) {
    double s = 0.0;
    for (size_t i = 0; i < d; ++i) {
        double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

}  // namespace crimelab
