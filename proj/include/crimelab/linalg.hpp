#pragma once

#include <vector>

#include "crimelab/common.hpp"

namespace crimelab {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

/// The d x d upper-triangular factor R of A = QR (Householder reflections,
/// Q discarded). Rows beyond d are folded in; A with fewer rows than columns
/// yields zero rows in R. Satisfies R^T R = A^T A.
Matrix qr_r(const Matrix& a);

/// One-sided Jacobi SVD of a square matrix: A = U diag(S) V^T. Returns
/// singular values (descending, nonnegative) and right singular vectors as
/// columns of V; U is not formed. Accurate for the small d seen here.
void jacobi_svd(const Matrix& a, std::vector<double>& singular_values, Matrix& v);

}  // namespace crimelab
