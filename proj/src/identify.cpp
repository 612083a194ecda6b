#include "structpca/identify.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace structpca {

namespace {

void check_options(const IdentifyOptions& opts) {
  if (!(opts.rank_tol_rel > 0.0 && opts.rank_tol_rel < 1.0)) {
    raise(Errc::invalid_argument, "rank_tol_rel must lie in (0, 1)");
  }
}

void check_data(const Mat& y, int m) {
  require_finite(y, "data matrix");
  if (m <= 0) raise(Errc::invalid_argument, "m must be positive");
  if (m >= y.rows()) {
    raise(Errc::invalid_argument, "m must be smaller than the number of variables");
  }
  if (y.cols() < y.rows()) {
    raise(Errc::too_few_samples, "need at least as many samples as variables");
  }
}

Mat centered(const Mat& y) {
  return y.colwise() - y.rowwise().mean();
}

Mat sample_covariance(const Mat& y, bool center) {
  const Mat& src = y;
  Mat cov;
  if (center) {
    const Mat c = centered(src);
    cov = (c * c.transpose()) / static_cast<double>(src.cols());
  } else {
    cov = (src * src.transpose()) / static_cast<double>(src.cols());
  }
  // exact symmetry, eigensolver input
  cov = ((cov + cov.transpose()) * 0.5).eval();
  return cov;
}

Mat select_rows(const Mat& y, const std::vector<int>& idx) {
  Mat out(static_cast<Eigen::Index>(idx.size()), y.cols());
  for (size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = y.row(idx[k]);
  return out;
}

/// Residual of a unit-norm candidate off the accumulated row space; an empty
/// accumulator accepts everything.
double candidate_residual(const Mat& acc, const RowVec& cand, double eig_tol) {
  if (acc.rows() == 0) return cand.norm();
  return row_space_residual(acc, cand, eig_tol);
}

void append_row(Mat& acc, const RowVec& row) {
  acc.conservativeResize(acc.rows() + 1, Eigen::NoChange);
  acc.row(acc.rows() - 1) = row;
}

struct SortedMaskContext {
  StructureMask mask;      // sorted rows
  RowPermutation perm;     // sorted row i came from input row perm.order[i]
};

Mat unpermute_rows(const Mat& sorted_rows, const RowPermutation& perm) {
  Mat out(sorted_rows.rows(), sorted_rows.cols());
  for (int i = 0; i < perm.size(); ++i) out.row(perm.order[i]) = sorted_rows.row(i);
  return out;
}

/// Core of the cPCA step: estimate l new rows orthogonal (in the projected
/// sense) to the known ones. Returns the new rows only, unit-normalised.
Mat cpca_new_rows(const Mat& y, const Mat& a_kn, int l, bool center,
                  double eig_tol, Vec* eigenvalues_out) {
  const Eigen::Index n = y.rows();
  if (a_kn.cols() != n) {
    raise(Errc::dimension_mismatch,
          "known rows have width " + std::to_string(a_kn.cols()) + ", data has " +
              std::to_string(n) + " variables");
  }
  if (l < 1) raise(Errc::invalid_argument, "l must be at least 1");
  if (numeric_rank(a_kn, eig_tol) != a_kn.rows()) {
    raise(Errc::known_rows_rank_deficient, "known constraint rows are dependent");
  }

  const Mat basis = null_space_basis(a_kn, eig_tol);  // n x (n - (m - l))
  if (basis.cols() < l) {
    raise(Errc::invalid_argument,
          "null space of the known rows has fewer than l directions");
  }
  const Mat y_proj = pinv_apply(basis, y);
  const Mat cov = sample_covariance(y_proj, center);
  const SymEig eig = sym_eig(cov);
  if (eigenvalues_out) *eigenvalues_out = eig.eigenvalues;

  const Mat a_proj = eig.eigenvectors.leftCols(l).transpose();  // l x dim
  Mat rows = a_proj * pseudo_inverse(basis);                    // l x n
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm <= 0.0) raise(Errc::degenerate_covariance, "estimated row collapsed to zero");
    rows.row(i) /= norm;
  }
  return rows;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::pca: return "pca";
    case Method::spca: return "spca";
    case Method::cpca: return "cpca";
    case Method::cspca: return "cspca";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "pca") return Method::pca;
  if (name == "spca") return Method::spca;
  if (name == "cpca") return Method::cpca;
  if (name == "cspca") return Method::cspca;
  raise(Errc::invalid_argument, "unknown method '" + name + "'");
}

IdentifyResult pca_identify(const Mat& y, int m, const IdentifyOptions& opts) {
  check_options(opts);
  check_data(y, m);

  const Mat cov = sample_covariance(y, opts.center_data);
  if (cov.cwiseAbs().maxCoeff() <= 0.0) {
    raise(Errc::degenerate_covariance, "sample covariance is identically zero");
  }
  const SymEig eig = sym_eig(cov);

  IdentifyResult result;
  result.method = Method::pca;
  result.model = ConstraintModel{eig.eigenvectors.leftCols(m).transpose(), std::nullopt};
  result.permutation = RowPermutation::identity(m);
  result.stages.push_back({"covariance", eig.eigenvalues});
  return result;
}

double noise_variance_estimate(const Mat& y, int m) {
  check_data(y, m);
  const Mat cov = sample_covariance(y, false);
  const SymEig eig = sym_eig(cov);
  return eig.eigenvalues.head(m).mean();
}

IdentifyResult spca_identify(const Mat& y, const StructureMask& mask,
                             const IdentifyOptions& opts) {
  check_options(opts);
  check_data(y, mask.rows());
  if (mask.cols() != y.rows()) {
    raise(Errc::dimension_mismatch, "mask width does not match variable count");
  }

  const int m = mask.rows();
  const int n = mask.cols();
  auto [sorted, perm] = restructure(mask);
  const Mat data = opts.center_data ? centered(y) : y;

  IdentifyResult result;
  result.method = Method::spca;
  result.permutation = perm;

  Mat acc(0, n);                 // accepted rows so far, sorted order
  std::vector<RowVec> slots(m);  // sorted row index -> estimated row

  for (int i = 0; i < m; ++i) {
    bool seen = false;
    for (int j = 0; j < i && !seen; ++j) seen = sorted.rows_equal(i, j);
    if (seen) continue;  // structure similarity test: already handled with row j

    const std::vector<int> supp = support(sorted, i);
    const int needed = group_count(sorted, i);
    std::vector<int> members;
    for (int j = i; j < m; ++j) {
      if (sorted.rows_equal(i, j)) members.push_back(j);
    }

    const Mat cov = sample_covariance(select_rows(data, supp), false);
    const SymEig eig = sym_eig(cov);
    result.stages.push_back({"row " + std::to_string(i + 1) + " (original " +
                                 std::to_string(perm.order[i] + 1) + ")",
                             eig.eigenvalues});

    int accepted = 0;
    for (Eigen::Index k = 0; k < eig.eigenvectors.cols() && accepted < needed; ++k) {
      const RowVec candidate =
          embed_row(eig.eigenvectors.col(k).transpose(), supp, n);
      if (candidate_residual(acc, candidate, opts.eig_tol) > opts.rank_tol_rel) {
        append_row(acc, candidate);
        slots[members[static_cast<size_t>(accepted)]] = candidate;
        ++accepted;
      }
    }
    if (accepted < needed) {
      raise(Errc::structure_infeasible,
            "row " + std::to_string(perm.order[i] + 1) + ": only " +
                std::to_string(accepted) + " of " + std::to_string(needed) +
                " constraints passed the rank filter");
    }
  }

  Mat sorted_rows(m, n);
  for (int i = 0; i < m; ++i) sorted_rows.row(i) = slots[i];
  result.model = ConstraintModel{unpermute_rows(sorted_rows, perm), mask};
  return result;
}

IdentifyResult cpca_identify(const Mat& y, const Mat& a_kn, int l,
                             const IdentifyOptions& opts) {
  check_options(opts);
  require_finite(a_kn, "known constraint rows");
  check_data(y, static_cast<int>(a_kn.rows()) + l);

  const Mat data = opts.center_data ? centered(y) : y;
  Vec eigenvalues;
  const Mat rows = cpca_new_rows(data, a_kn, l, false, opts.eig_tol, &eigenvalues);

  Mat full(a_kn.rows() + l, y.rows());
  full.topRows(a_kn.rows()) = a_kn;  // known rows kept as given
  full.bottomRows(l) = rows;

  IdentifyResult result;
  result.method = Method::cpca;
  result.model = ConstraintModel{std::move(full), std::nullopt};
  result.permutation = RowPermutation::identity(static_cast<int>(a_kn.rows()) + l);
  result.stages.push_back({"projected", eigenvalues});
  return result;
}

IdentifyResult cspca_identify(const Mat& y, const StructureMask& mask,
                              const IdentifyOptions& opts) {
  check_options(opts);
  check_data(y, mask.rows());
  if (mask.cols() != y.rows()) {
    raise(Errc::dimension_mismatch, "mask width does not match variable count");
  }

  const int m = mask.rows();
  const int n = mask.cols();
  auto [sorted, perm] = restructure(mask);
  const std::vector<EquationLabel> labels = label_equations(sorted, perm);
  const Mat data = opts.center_data ? centered(y) : y;

  IdentifyResult result;
  result.method = Method::cspca;
  result.permutation = perm;
  result.labels = labels;

  Mat acc(0, n);
  Mat sorted_rows(m, n);

  for (int i = 0; i < m; ++i) {
    const EquationLabel& rec = labels[i];
    const std::vector<int>& supp = rec.phi;
    const Mat y_sub = select_rows(data, supp);

    RowVec row;
    if (rec.label == EqLabel::S) {
      const Mat cov = sample_covariance(y_sub, false);
      const SymEig eig = sym_eig(cov);
      result.stages.push_back(
          {"row " + std::to_string(i + 1) + " [S]", eig.eigenvalues});

      bool found = false;
      for (Eigen::Index k = 0; k < eig.eigenvectors.cols() && !found; ++k) {
        const RowVec candidate = embed_row(eig.eigenvectors.col(k).transpose(), supp, n);
        if (candidate_residual(acc, candidate, opts.eig_tol) > opts.rank_tol_rel) {
          row = candidate;
          found = true;
        }
      }
      if (!found) {
        raise(Errc::structure_infeasible,
              "row " + std::to_string(rec.original_row + 1) +
                  ": no candidate passed the rank filter");
      }
    } else {
      // Known part: previously estimated sub-structured equations restricted
      // to this row's support. Their own supports are subsets, so the
      // restriction drops only structural zeros.
      Mat known(static_cast<Eigen::Index>(rec.psi.size()), supp.size());
      for (size_t r = 0; r < rec.psi.size(); ++r) {
        for (size_t c = 0; c < supp.size(); ++c) {
          known(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              sorted_rows(rec.psi[r], supp[c]);
        }
      }
      Vec eigenvalues;
      const Mat new_rows = cpca_new_rows(y_sub, known, 1, false, opts.eig_tol, &eigenvalues);
      result.stages.push_back(
          {"row " + std::to_string(i + 1) + " [C]", eigenvalues});
      row = embed_row(new_rows.row(0), supp, n);
    }

    sorted_rows.row(i) = row;
    append_row(acc, row);
  }

  result.model = ConstraintModel{unpermute_rows(sorted_rows, perm), mask};
  return result;
}

}  // namespace structpca
