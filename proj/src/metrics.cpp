#include "structpca/metrics.hpp"

#include <cmath>
#include <string>

namespace structpca {

ThetaReport subspace_dependence(const Mat& a0, const Mat& a_hat, bool normalize_rows,
                                double rank_tol) {
  if (a0.cols() != a_hat.cols()) {
    raise(Errc::shape_mismatch, "column counts differ: " + std::to_string(a0.cols()) +
                                    " vs " + std::to_string(a_hat.cols()));
  }
  require_finite(a0, "true model");
  require_finite(a_hat, "estimate");

  Eigen::JacobiSVD<Mat> svd(a_hat, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double tol = rank_tol > 0.0 ? rank_tol : default_rank_tol(a_hat);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(0) > 0.0 && sv(i) > tol * sv(0)) ++rank;
  }
  if (rank < a_hat.rows()) {
    raise(Errc::rank_deficient_estimate,
          "estimate has numeric rank " + std::to_string(rank) + " < " +
              std::to_string(a_hat.rows()) + " rows");
  }
  const Mat q = svd.matrixV().leftCols(rank);  // n x r orthonormal

  ThetaReport report;
  report.normalized = normalize_rows;
  report.per_row.reserve(a0.rows());
  for (Eigen::Index i = 0; i < a0.rows(); ++i) {
    RowVec row = a0.row(i);
    if (normalize_rows) {
      const double norm = row.norm();
      if (norm > 0.0) row /= norm;
    }
    const double residual = (row - (row * q) * q.transpose()).norm();
    report.per_row.push_back(residual);
    report.theta += residual;
  }
  return report;
}

std::vector<int> best_instance_counts(const std::vector<std::vector<double>>& theta_runs) {
  if (theta_runs.empty()) return {};
  const size_t runs = theta_runs.front().size();
  for (const auto& per_method : theta_runs) {
    if (per_method.size() != runs) {
      raise(Errc::length_mismatch, "methods have unequal run counts");
    }
  }
  std::vector<int> counts(theta_runs.size(), 0);
  for (size_t r = 0; r < runs; ++r) {
    bool usable = true;
    for (const auto& per_method : theta_runs) {
      if (std::isnan(per_method[r])) usable = false;
    }
    if (!usable) continue;
    size_t best = 0;
    bool tie = false;
    for (size_t m = 1; m < theta_runs.size(); ++m) {
      const double v = theta_runs[m][r];
      const double b = theta_runs[best][r];
      if (v < b) {
        best = m;
        tie = false;
      } else if (v == b) {
        tie = true;
      }
    }
    if (!tie && theta_runs.size() > 0) ++counts[best];
  }
  return counts;
}

}  // namespace structpca
