#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "crimelab/common.hpp"

namespace testutil {

inline crimelab::Matrix random_matrix(crimelab::Rng& rng, size_t n, size_t d, double lo = 0.0,
                                      double hi = 1.0) {
    crimelab::Matrix m(n, d);
    for (double& v : m.data) v = lo + (hi - lo) * rng.unit();
    return m;
}

inline std::vector<int> random_labels(crimelab::Rng& rng, size_t n, int k) {
    std::vector<int> y(n);
    for (int& v : y) v = static_cast<int>(rng.index(static_cast<size_t>(k)));
    return y;
}

/// Gaussian blobs with per-class centers drawn from [-5, 5]^d. Rows are
/// grouped by class.
inline void make_blobs(crimelab::Rng& rng, const std::vector<long>& counts, size_t d,
                       double spread, crimelab::Matrix& X, std::vector<int>& y) {
    size_t total = 0;
    for (long c : counts) total += static_cast<size_t>(c);
    X = crimelab::Matrix(total, d);
    y.assign(total, 0);
    std::vector<std::vector<double>> centers(counts.size(), std::vector<double>(d));
    for (auto& center : centers) {
        for (double& v : center) v = -5.0 + 10.0 * rng.unit();
    }
    size_t row = 0;
    for (size_t c = 0; c < counts.size(); ++c) {
        for (long i = 0; i < counts[c]; ++i, ++row) {
            for (size_t j = 0; j < d; ++j) {
                X.at(row, j) = centers[c][j] + spread * rng.normal();
            }
            y[row] = static_cast<int>(c);
        }
    }
}

/// Unique scratch directory under the system temp root.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("crimelab_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++)))
                    .string();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace testutil
