#include "crimelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crimelab {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
    Matrix out(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (size_t k = 0; k < a.cols; ++k) {
            double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row(k);
            for (size_t j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (size_t i = 0; i < m.rows; ++i) {
        for (size_t j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
    }
    return out;
}

Matrix qr_r(const Matrix& a) {
    size_t n = a.rows, d = a.cols;
    Matrix work = a;
    size_t steps = std::min(n, d);
    std::vector<double> v(n);
    for (size_t k = 0; k < steps; ++k) {
        // Householder vector for column k below the diagonal.
        double norm = 0.0;
        for (size_t i = k; i < n; ++i) {
            double x = work.at(i, k);
            norm += x * x;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        double alpha = work.at(k, k) >= 0.0 ? -norm : norm;
        double vnorm2 = 0.0;
        for (size_t i = k; i < n; ++i) {
            v[i] = work.at(i, k);
            if (i == k) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        for (size_t j = k; j < d; ++j) {
            double dot = 0.0;
            for (size_t i = k; i < n; ++i) dot += v[i] * work.at(i, j);
            double scale = 2.0 * dot / vnorm2;
            for (size_t i = k; i < n; ++i) work.at(i, j) -= scale * v[i];
        }
    }
    Matrix r(d, d);
    for (size_t i = 0; i < steps; ++i) {
        for (size_t j = i; j < d; ++j) r.at(i, j) = work.at(i, j);
    }
    return r;
}

void jacobi_svd(const Matrix& a, std::vector<double>& singular_values, Matrix& v) {
    if (a.rows != a.cols) throw std::invalid_argument("jacobi_svd: square input expected");
    size_t d = a.cols;
    Matrix u = a;  // columns orthogonalized in place
    v = Matrix(d, d);
    for (size_t i = 0; i < d; ++i) v.at(i, i) = 1.0;

    const double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (size_t p = 0; p + 1 < d; ++p) {
            for (size_t q = p + 1; q < d; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (size_t i = 0; i < d; ++i) {
                    double up = u.at(i, p), uq = u.at(i, q);
                    app += up * up;
                    aqq += uq * uq;
                    apq += up * uq;
                }
                if (std::abs(apq) <= eps * std::sqrt(app * aqq)) continue;
                rotated = true;
                // Jacobi rotation zeroing the (p,q) inner product.
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (size_t i = 0; i < d; ++i) {
                    double up = u.at(i, p), uq = u.at(i, q);
                    u.at(i, p) = c * up - s * uq;
                    u.at(i, q) = s * up + c * uq;
                }
                for (size_t i = 0; i < d; ++i) {
                    double vp = v.at(i, p), vq = v.at(i, q);
                    v.at(i, p) = c * vp - s * vq;
                    v.at(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    singular_values.assign(d, 0.0);
    for (size_t j = 0; j < d; ++j) {
        double norm = 0.0;
        for (size_t i = 0; i < d; ++i) norm += u.at(i, j) * u.at(i, j);
        singular_values[j] = std::sqrt(norm);
    }
    // Sort descending, carrying V's columns along.
    std::vector<size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return singular_values[x] > singular_values[y];
    });
    std::vector<double> sorted_s(d);
    Matrix sorted_v(d, d);
    for (size_t j = 0; j < d; ++j) {
        sorted_s[j] = singular_values[order[j]];
        for (size_t i = 0; i < d; ++i) sorted_v.at(i, j) = v.at(i, order[j]);
    }
    singular_values = std::move(sorted_s);
    v = std::move(sorted_v);
}

}  // namespace crimelab
