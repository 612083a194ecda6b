#pragma once

#include <Eigen/Dense>

#include "structpca/errors.hpp"

namespace structpca {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;

/// Throws Errc::invalid_argument if any entry is NaN or infinite.
void require_finite(const Mat& m, const char* what);

/// Relative rank tolerance used when the caller passes a non-positive value:
/// max(rows, cols) * machine epsilon. Thresholds are always taken relative to
/// the largest singular value.
double default_rank_tol(const Mat& m);

struct SymEig {
  Vec eigenvalues;   // ascending
  Mat eigenvectors;  // columns aligned with eigenvalues, orthonormal
};

/// Eigendecomposition of a symmetric matrix. Eigenvalues ascending; each
/// eigenvector column is flipped so its largest-magnitude entry is positive.
SymEig sym_eig(const Mat& s);

/// Orthonormal basis of the null space of `a` (rows m <= cols n).
/// Columns B satisfy max|a*B| < rel_tol * ||a||_2.
Mat null_space_basis(const Mat& a, double rel_tol = -1.0);

/// Count of singular values above rel_tol * sigma_max.
int numeric_rank(const Mat& a, double rel_tol = -1.0);

/// ||b - proj_rowspace(a)(b)||_2 via an orthonormal basis of a's row space.
/// Requires a to have full numeric row rank.
double row_space_residual(const Mat& a, const RowVec& b, double rel_tol = -1.0);

/// Least-squares solution of a*Z = y for full-column-rank a: (a^T a)^-1 a^T y.
Mat pinv_apply(const Mat& a, const Mat& y);

/// Moore-Penrose pseudo-inverse via SVD. Raises RankDeficient when the
/// condition number exceeds 1e12.
Mat pseudo_inverse(const Mat& a);

/// Deterministic sign convention: flip each column so that its
/// largest-magnitude entry is positive.
void fix_column_signs(Mat& m);

}  // namespace structpca
