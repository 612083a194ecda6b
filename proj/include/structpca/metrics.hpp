#pragma once

#include <vector>

#include "structpca/matops.hpp"

namespace structpca {

struct ThetaReport {
  double theta = 0.0;           // sum of per_row
  std::vector<double> per_row;  // one residual norm per true-model row
  bool normalized = false;
};

/// Subspace-dependence metric: sum over rows of a0 of the residual norm after
/// projecting each row onto the row space of a_hat (computed through an
/// orthonormal basis). With normalize_rows the a0 rows are scaled to unit
/// norm first.
ThetaReport subspace_dependence(const Mat& a0, const Mat& a_hat,
                                bool normalize_rows = false, double rank_tol = -1.0);

/// Per-method count of runs where that method attains the strictly smallest
/// theta. Ties count for no method.
std::vector<int> best_instance_counts(const std::vector<std::vector<double>>& theta_runs);

}  // namespace structpca
