#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "structpca/matops.hpp"

namespace structpca {

/// Zero/non-zero sparsity pattern of a constraint matrix. true = the entry
/// may be non-zero. Validated on construction: no empty row, at least two
/// active entries per row (a single-entry row would pin a variable to zero),
/// and m < n so the model keeps a non-trivial null space.
class StructureMask {
 public:
  StructureMask(int rows, int cols, std::vector<uint8_t> cells);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool at(int i, int j) const { return cells_[static_cast<size_t>(i) * cols_ + j] != 0; }
  const std::vector<uint8_t>& cells() const { return cells_; }

  int row_nnz(int i) const;
  bool rows_equal(int i, int j) const;

  /// Mask derived from the exact non-zero pattern of a matrix.
  static StructureMask from_pattern(const Mat& a);

 private:
  int rows_;
  int cols_;
  std::vector<uint8_t> cells_;
};

/// Maps output rows to input rows: output row i came from input row order[i].
struct RowPermutation {
  std::vector<int> order;

  static RowPermutation identity(int m);
  RowPermutation inverse() const;
  int size() const { return static_cast<int>(order.size()); }
};

/// Rows sorted ascending by non-zero count, stable among ties.
std::pair<StructureMask, RowPermutation> restructure(const StructureMask& mask);

/// Number of rows whose support equals row i's support (row i included).
int group_count(const StructureMask& mask, int i);

/// Active column indices of row i, ascending (0-based).
std::vector<int> support(const StructureMask& mask, int i);

enum class EqLabel : char { S = 'S', C = 'C' };

struct EquationLabel {
  int sorted_index;          // position after sorting (0-based)
  int original_row;          // row index in the caller's mask (0-based)
  std::vector<int> phi;      // support of this row
  std::vector<int> psi;      // earlier sorted rows whose support is a subset of phi
  EqLabel label;
};

/// Per-row phi/psi/label records. Precondition: mask rows already sorted
/// ascending by support size (see restructure). psi_i = { j < i : phi_j
/// subset-of phi_i }; label S when psi_i is empty, C otherwise.
std::vector<EquationLabel> label_equations(const StructureMask& sorted_mask,
                                           const RowPermutation& perm);

/// Place sub_row values at the given column positions of a width-n row,
/// zeros elsewhere. Support must be strictly ascending within [0, n).
RowVec embed_row(const RowVec& sub_row, const std::vector<int>& supp, int n);

/// Constraint matrix with an optional mask it conforms to.
struct ConstraintModel {
  Mat a;
  std::optional<StructureMask> mask;

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
};

/// Validates entries finite and full row rank.
ConstraintModel make_model(Mat a);

/// Additionally checks the matrix is zero everywhere the mask is false.
ConstraintModel make_model(Mat a, StructureMask mask);

}  // namespace structpca
