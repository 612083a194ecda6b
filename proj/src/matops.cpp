#include "structpca/matops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace structpca {

namespace {

constexpr double kMaxCondition = 1e12;

double resolve_tol(const Mat& m, double rel_tol) {
  return rel_tol > 0.0 ? rel_tol : default_rank_tol(m);
}

int rank_from_singular_values(const Vec& sv, double rel_tol) {
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  if (smax <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * smax) ++r;
  }
  return r;
}

}  // namespace

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) {
    raise(Errc::invalid_argument, std::string(what) + " contains NaN or infinite entries");
  }
}

double default_rank_tol(const Mat& m) {
  return static_cast<double>(std::max(m.rows(), m.cols())) *
         std::numeric_limits<double>::epsilon();
}

void fix_column_signs(Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index idx = 0;
    m.col(j).cwiseAbs().maxCoeff(&idx);
    if (m(idx, j) < 0.0) m.col(j) = -m.col(j);
  }
}

SymEig sym_eig(const Mat& s) {
  if (s.rows() != s.cols()) {
    raise(Errc::non_square, "matrix is " + std::to_string(s.rows()) + "x" +
                                std::to_string(s.cols()));
  }
  require_finite(s, "sym_eig input");
  const double scale = s.cwiseAbs().maxCoeff();
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-10 * scale) {
    raise(Errc::not_symmetric, "max asymmetry " + std::to_string(asym));
  }

  Eigen::SelfAdjointEigenSolver<Mat> solver(s);
  if (solver.info() != Eigen::Success) {
    raise(Errc::failed_to_converge, "symmetric eigensolver did not converge");
  }
  SymEig out{solver.eigenvalues(), solver.eigenvectors()};
  fix_column_signs(out.eigenvectors);
  return out;
}

Mat null_space_basis(const Mat& a, double rel_tol) {
  if (a.rows() > a.cols()) {
    raise(Errc::invalid_argument, "null_space_basis expects rows <= cols");
  }
  require_finite(a, "null_space_basis input");
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), resolve_tol(a, rel_tol));
  const Eigen::Index k = a.cols() - r;
  if (k == 0) {
    raise(Errc::empty_null_space, "matrix has full column rank");
  }
  Mat basis = svd.matrixV().rightCols(k);
  fix_column_signs(basis);
  return basis;
}

int numeric_rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  require_finite(a, "numeric_rank input");
  Eigen::JacobiSVD<Mat> svd(a);
  return rank_from_singular_values(svd.singularValues(), resolve_tol(a, rel_tol));
}

double row_space_residual(const Mat& a, const RowVec& b, double rel_tol) {
  if (a.cols() != b.cols()) {
    raise(Errc::shape_mismatch, "row vector width " + std::to_string(b.cols()) +
                                    " does not match matrix width " +
                                    std::to_string(a.cols()));
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), resolve_tol(a, rel_tol));
  if (r < a.rows()) {
    raise(Errc::rank_deficient_base, "base matrix has numeric rank " + std::to_string(r) +
                                         " < " + std::to_string(a.rows()) + " rows");
  }
  const Mat q = svd.matrixV().leftCols(r);  // n x r, orthonormal columns
  return (b - (b * q) * q.transpose()).norm();
}

Mat pinv_apply(const Mat& a, const Mat& y) {
  if (a.rows() != y.rows()) {
    raise(Errc::shape_mismatch, "pinv_apply: a has " + std::to_string(a.rows()) +
                                    " rows, y has " + std::to_string(y.rows()));
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  const int r = rank_from_singular_values(sv, default_rank_tol(a));
  if (r < a.cols()) {
    raise(Errc::rank_deficient, "matrix does not have full column rank");
  }
  if (sv(0) > kMaxCondition * sv(sv.size() - 1)) {
    raise(Errc::rank_deficient, "condition number exceeds 1e12");
  }
  return svd.solve(y);
}

Mat pseudo_inverse(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  const int r = rank_from_singular_values(sv, default_rank_tol(a));
  if (r == 0) {
    raise(Errc::rank_deficient, "zero matrix has no pseudo-inverse of interest");
  }
  if (sv(0) > kMaxCondition * sv(r - 1)) {
    raise(Errc::rank_deficient, "condition number exceeds 1e12");
  }
  Vec inv = Vec::Zero(sv.size());
  for (int i = 0; i < r; ++i) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace structpca
