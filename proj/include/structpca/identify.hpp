#pragma once

#include <string>
#include <vector>

#include "structpca/structure.hpp"

namespace structpca {

enum class Method { pca, spca, cpca, cspca };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct IdentifyOptions {
  /// A candidate row (unit norm) counts as a new constraint when its residual
  /// off the accumulated row space exceeds this. Noisy eigenvectors are never
  /// exactly dependent, so an integer rank test would accept everything.
  double rank_tol_rel = 0.1;
  /// Rank/null-space tolerance forwarded to the matrix primitives;
  /// non-positive selects their default.
  double eig_tol = -1.0;
  bool center_data = false;
};

struct StageEigen {
  std::string stage;
  Vec eigenvalues;  // ascending
};

struct IdentifyResult {
  ConstraintModel model;  // rows in the caller's original order
  Method method = Method::pca;
  RowPermutation permutation;        // internal processing order (output -> input)
  std::vector<StageEigen> stages;    // eigenvalue diagnostics per stage
  std::vector<EquationLabel> labels; // cspca only
};

/// Plain PCA: eigenvectors of S_y = (1/N) Y Y^T with the m smallest
/// eigenvalues, transposed into rows. Rows are orthonormal.
IdentifyResult pca_identify(const Mat& y, int m, const IdentifyOptions& opts = {});

/// Mean of the m smallest eigenvalues of the sample covariance.
double noise_variance_estimate(const Mat& y, int m);

/// Structured PCA: per-row PCA on the masked variable subset with
/// restructuring, structure-similarity skipping and rank-based candidate
/// filtering.
IdentifyResult spca_identify(const Mat& y, const StructureMask& mask,
                             const IdentifyOptions& opts = {});

/// Constrained PCA: project data onto the null space of the known rows, run
/// PCA there for the l unknown rows, map back, and stack [a_kn; estimate].
IdentifyResult cpca_identify(const Mat& y, const Mat& a_kn, int l,
                             const IdentifyOptions& opts = {});

/// Combined algorithm: S-labelled equations via structured PCA, C-labelled
/// equations via constrained PCA with the previously estimated sub-structured
/// equations as known constraints.
IdentifyResult cspca_identify(const Mat& y, const StructureMask& mask,
                              const IdentifyOptions& opts = {});

}  // namespace structpca
