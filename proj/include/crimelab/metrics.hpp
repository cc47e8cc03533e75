#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crimelab/common.hpp"

namespace crimelab {

/// Rows index the true class, columns the predicted class.
struct ConfusionMatrix {
    size_t n_classes = 0;
    std::vector<uint64_t> counts;  // row-major

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(size_t k) : n_classes(k), counts(k * k, 0) {}

    uint64_t& at(size_t t, size_t p) { return counts[t * n_classes + p]; }
    uint64_t at(size_t t, size_t p) const { return counts[t * n_classes + p]; }
    uint64_t total() const;
    uint64_t diagonal() const;
    uint64_t row_sum(size_t r) const;
    uint64_t col_sum(size_t c) const;
};

double accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred);

/// Mean squared error over the integer class codes. The value depends on the
/// code assignment (here: lexicographic category order), so it is comparable
/// only between runs sharing that assignment.
double mse_labels(const std::vector<int>& y_true, const std::vector<int>& y_pred);

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred, int n_classes);

/// diagonal/total; equals accuracy() of the underlying vectors exactly.
double accuracy_from_confusion(const ConfusionMatrix& cm);

struct PrfRow {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    uint64_t support = 0;  // true-class row count
    bool precision_zero_division = false;
    bool recall_zero_division = false;
    bool f1_zero_division = false;
};

struct PrfTable {
    std::vector<PrfRow> per_class;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    bool any_zero_division = false;
};

/// Per-class precision (column), recall (row), f1, plus macro and
/// support-weighted averages. A zero denominator defines the metric as 0 and
/// sets the matching flag.
PrfTable precision_recall_f1(const ConfusionMatrix& cm);

struct RocCurve {
    int positive_class = 0;
    uint64_t n_positive = 0;
    uint64_t n_negative = 0;
    std::vector<double> fpr;         // ascending, (0,0) first, (1,1) last
    std::vector<double> tpr;
    std::vector<double> thresholds;  // +inf, then the descending unique scores
    double auc = 0.0;
};

/// One-vs-rest curve for class `cls`: positives are rows with y_true == cls,
/// scored by column `cls` of `scores`. The threshold sweeps descending unique
/// score values, so a tied block moves as one step; AUC is the trapezoid area.
/// Throws DataError when the class has no positives or no negatives.
RocCurve roc_ovr(const std::vector<int>& y_true, const Matrix& scores, int cls);

struct TTestResult {
    size_t n = 0;
    double df = 0.0;
    double mean_diff = 0.0;
    double sd_diff = 0.0;  // sample standard deviation (n - 1 denominator)
    double t = 0.0;        // +/-infinity when sd_diff == 0 and mean_diff != 0
    double p = 1.0;        // two-tailed
    double alpha = 0.05;
    bool reject = false;
    std::string decision;
};

/// Paired two-tailed t-test on elementwise differences a - b. Degenerate
/// inputs: zero-variance, zero-mean differences give t = 0, p = 1;
/// zero-variance, nonzero-mean give an infinite t and p = 0.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// Regularized incomplete beta I_x(a, b), absolute error <= 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-tailed p-value for Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace crimelab
