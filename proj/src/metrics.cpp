#include "crimelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace crimelab {

namespace {

void check_label_pair(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.empty()) throw ConfigError("label vectors are empty");
    if (y_true.size() != y_pred.size()) {
        std::ostringstream os;
        os << "label vector length mismatch: " << y_true.size() << " vs " << y_pred.size();
        throw ConfigError(os.str());
    }
}

// Continued fraction for the incomplete beta (modified Lentz). Converges to
// near machine precision for the x range the caller selects.
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

uint64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

uint64_t ConfusionMatrix::diagonal() const {
    uint64_t s = 0;
    for (size_t i = 0; i < n_classes; ++i) s += at(i, i);
    return s;
}

uint64_t ConfusionMatrix::row_sum(size_t r) const {
    uint64_t s = 0;
    for (size_t c = 0; c < n_classes; ++c) s += at(r, c);
    return s;
}

uint64_t ConfusionMatrix::col_sum(size_t c) const {
    uint64_t s = 0;
    for (size_t r = 0; r < n_classes; ++r) s += at(r, c);
    return s;
}

double accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    check_label_pair(y_true, y_pred);
    uint64_t correct = 0;
    for (size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(y_true.size());
}

double mse_labels(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    check_label_pair(y_true, y_pred);
    double sum = 0.0;
    for (size_t i = 0; i < y_true.size(); ++i) {
        const double diff = static_cast<double>(y_true[i]) - static_cast<double>(y_pred[i]);
        sum += diff * diff;
    }
    return sum / static_cast<double>(y_true.size());
}

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred, int n_classes) {
    check_label_pair(y_true, y_pred);
    if (n_classes < 1) throw ConfigError("confusion matrix needs n_classes >= 1");
    ConfusionMatrix cm(static_cast<size_t>(n_classes));
    for (size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if (t < 0 || t >= n_classes || p < 0 || p >= n_classes) {
            std::ostringstream os;
            os << "label out of range at row " << i << ": true " << t << ", predicted " << p
               << ", n_classes " << n_classes;
            throw DataError(os.str());
        }
        ++cm.at(static_cast<size_t>(t), static_cast<size_t>(p));
    }
    return cm;
}

double accuracy_from_confusion(const ConfusionMatrix& cm) {
    const uint64_t n = cm.total();
    if (n == 0) throw ConfigError("empty confusion matrix");
    return static_cast<double>(cm.diagonal()) / static_cast<double>(n);
}

PrfTable precision_recall_f1(const ConfusionMatrix& cm) {
    const uint64_t n = cm.total();
    if (cm.n_classes == 0 || n == 0) throw ConfigError("empty confusion matrix");

    PrfTable out;
    out.per_class.resize(cm.n_classes);
    double wp = 0.0, wr = 0.0, wf = 0.0;
    for (size_t c = 0; c < cm.n_classes; ++c) {
        PrfRow& row = out.per_class[c];
        const uint64_t diag = cm.at(c, c);
        const uint64_t col = cm.col_sum(c);
        const uint64_t rowsum = cm.row_sum(c);
        row.support = rowsum;

        if (col > 0) {
            row.precision = static_cast<double>(diag) / static_cast<double>(col);
        } else {
            row.precision_zero_division = true;
        }
        if (rowsum > 0) {
            row.recall = static_cast<double>(diag) / static_cast<double>(rowsum);
        } else {
            row.recall_zero_division = true;
        }
        if (row.precision + row.recall > 0.0) {
            row.f1 = 2.0 * row.precision * row.recall / (row.precision + row.recall);
        } else {
            row.f1_zero_division = true;
        }
        out.any_zero_division = out.any_zero_division || row.precision_zero_division ||
                                row.recall_zero_division || row.f1_zero_division;

        out.macro_precision += row.precision;
        out.macro_recall += row.recall;
        out.macro_f1 += row.f1;
        const double w = static_cast<double>(rowsum);
        wp += w * row.precision;
        wr += w * row.recall;
        wf += w * row.f1;
    }
    const double k = static_cast<double>(cm.n_classes);
    out.macro_precision /= k;
    out.macro_recall /= k;
    out.macro_f1 /= k;
    out.weighted_precision = wp / static_cast<double>(n);
    out.weighted_recall = wr / static_cast<double>(n);
    out.weighted_f1 = wf / static_cast<double>(n);
    return out;
}

RocCurve roc_ovr(const std::vector<int>& y_true, const Matrix& scores, int cls) {
    if (y_true.empty()) throw ConfigError("empty label vector");
    if (scores.rows != y_true.size()) {
        std::ostringstream os;
        os << "score matrix has " << scores.rows << " rows for " << y_true.size() << " labels";
        throw ConfigError(os.str());
    }
    if (cls < 0 || static_cast<size_t>(cls) >= scores.cols) {
        throw ConfigError("class " + std::to_string(cls) + " outside the score matrix");
    }

    const size_t n = y_true.size();
    RocCurve curve;
    curve.positive_class = cls;
    std::vector<double> score(n);
    for (size_t i = 0; i < n; ++i) {
        const double s = scores.at(i, static_cast<size_t>(cls));
        if (!std::isfinite(s)) {
            throw DataError("non-finite score at row " + std::to_string(i));
        }
        score[i] = s;
        if (y_true[i] == cls) ++curve.n_positive;
    }
    curve.n_negative = n - curve.n_positive;
    if (curve.n_positive == 0 || curve.n_negative == 0) {
        throw DataError("AUC undefined for class " + std::to_string(cls) + ": " +
                        std::to_string(curve.n_positive) + " positives, " +
                        std::to_string(curve.n_negative) + " negatives");
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });

    const double inv_p = 1.0 / static_cast<double>(curve.n_positive);
    const double inv_n = 1.0 / static_cast<double>(curve.n_negative);
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    curve.thresholds.push_back(std::numeric_limits<double>::infinity());

    uint64_t tp = 0, fp = 0;
    size_t i = 0;
    double area = 0.0;
    while (i < n) {
        const double s = score[order[i]];
        size_t j = i;
        while (j < n && score[order[j]] == s) {
            if (y_true[order[j]] == cls) ++tp;
            else ++fp;
            ++j;
        }
        const double x = static_cast<double>(fp) * inv_n;
        const double y = static_cast<double>(tp) * inv_p;
        area += (x - curve.fpr.back()) * (y + curve.tpr.back()) * 0.5;
        curve.fpr.push_back(x);
        curve.tpr.push_back(y);
        curve.thresholds.push_back(s);
        i = j;
    }
    curve.auc = area;
    return curve;
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "paired t-test needs equal lengths, got " << a.size() << " and " << b.size();
        throw ConfigError(os.str());
    }
    if (a.size() < 2) throw ConfigError("paired t-test needs at least 2 pairs");

    TTestResult r;
    r.n = a.size();
    r.df = static_cast<double>(r.n - 1);

    std::vector<double> d(r.n);
    for (size_t i = 0; i < r.n; ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw DataError("non-finite value in paired t-test input");
        }
        d[i] = a[i] - b[i];
    }
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(r.n);
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    r.mean_diff = mean;
    r.sd_diff = std::sqrt(ss / r.df);

    if (r.sd_diff == 0.0) {
        if (mean == 0.0) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
    } else {
        r.t = mean / (r.sd_diff / std::sqrt(static_cast<double>(r.n)));
        r.p = student_t_two_sided_p(r.t, r.df);
    }
    r.reject = r.p < r.alpha;
    r.decision = r.reject ? "reject the null hypothesis at alpha = 0.05 (p < alpha)"
                          : "cannot reject the null hypothesis at alpha = 0.05 (p >= alpha)";
    return r;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("incomplete beta needs a > 0 and b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cont_frac(a, b, x) / a;
    }
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw ConfigError("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

}  // namespace crimelab
