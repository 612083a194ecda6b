#include "structpca/structure.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace structpca {

StructureMask::StructureMask(int rows, int cols, std::vector<uint8_t> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows <= 0 || cols <= 0) {
    raise(Errc::invalid_argument, "mask dimensions must be positive");
  }
  if (cells_.size() != static_cast<size_t>(rows) * cols) {
    raise(Errc::invalid_argument, "mask cell count does not match dimensions");
  }
  if (rows >= cols) {
    raise(Errc::invalid_argument,
          "mask must have fewer rows than columns (m < n), got " + std::to_string(rows) +
              "x" + std::to_string(cols));
  }
  for (int i = 0; i < rows; ++i) {
    const int nnz = row_nnz(i);
    if (nnz == 0) {
      raise(Errc::invalid_argument, "mask row " + std::to_string(i + 1) + " is empty");
    }
    if (nnz < 2) {
      raise(Errc::invalid_argument,
            "mask row " + std::to_string(i + 1) +
                " has a single active entry; it would force that variable to zero");
    }
  }
}

int StructureMask::row_nnz(int i) const {
  int count = 0;
  for (int j = 0; j < cols_; ++j) count += at(i, j) ? 1 : 0;
  return count;
}

bool StructureMask::rows_equal(int i, int j) const {
  for (int c = 0; c < cols_; ++c) {
    if (at(i, c) != at(j, c)) return false;
  }
  return true;
}

StructureMask StructureMask::from_pattern(const Mat& a) {
  std::vector<uint8_t> cells(static_cast<size_t>(a.rows()) * a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      cells[static_cast<size_t>(i) * a.cols() + j] = a(i, j) != 0.0 ? 1 : 0;
    }
  }
  return StructureMask(static_cast<int>(a.rows()), static_cast<int>(a.cols()),
                       std::move(cells));
}

RowPermutation RowPermutation::identity(int m) {
  RowPermutation p;
  p.order.resize(m);
  std::iota(p.order.begin(), p.order.end(), 0);
  return p;
}

RowPermutation RowPermutation::inverse() const {
  RowPermutation inv;
  inv.order.assign(order.size(), 0);
  for (int i = 0; i < size(); ++i) inv.order[order[i]] = i;
  return inv;
}

std::pair<StructureMask, RowPermutation> restructure(const StructureMask& mask) {
  RowPermutation perm = RowPermutation::identity(mask.rows());
  std::stable_sort(perm.order.begin(), perm.order.end(),
                   [&mask](int a, int b) { return mask.row_nnz(a) < mask.row_nnz(b); });

  std::vector<uint8_t> cells(static_cast<size_t>(mask.rows()) * mask.cols());
  for (int i = 0; i < mask.rows(); ++i) {
    for (int j = 0; j < mask.cols(); ++j) {
      cells[static_cast<size_t>(i) * mask.cols() + j] = mask.at(perm.order[i], j) ? 1 : 0;
    }
  }
  return {StructureMask(mask.rows(), mask.cols(), std::move(cells)), perm};
}

int group_count(const StructureMask& mask, int i) {
  if (i < 0 || i >= mask.rows()) {
    raise(Errc::invalid_argument, "row index out of range");
  }
  int count = 0;
  for (int j = 0; j < mask.rows(); ++j) {
    if (mask.rows_equal(i, j)) ++count;
  }
  return count;
}

std::vector<int> support(const StructureMask& mask, int i) {
  if (i < 0 || i >= mask.rows()) {
    raise(Errc::invalid_argument, "row index out of range");
  }
  std::vector<int> cols;
  for (int j = 0; j < mask.cols(); ++j) {
    if (mask.at(i, j)) cols.push_back(j);
  }
  return cols;
}

std::vector<EquationLabel> label_equations(const StructureMask& sorted_mask,
                                           const RowPermutation& perm) {
  const int m = sorted_mask.rows();
  if (perm.size() != m) {
    raise(Errc::length_mismatch, "permutation length does not match mask rows");
  }
  std::vector<std::vector<int>> phis(m);
  for (int i = 0; i < m; ++i) phis[i] = support(sorted_mask, i);

  auto is_subset = [](const std::vector<int>& small, const std::vector<int>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };

  std::vector<EquationLabel> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    EquationLabel rec;
    rec.sorted_index = i;
    rec.original_row = perm.order[i];
    rec.phi = phis[i];
    for (int j = 0; j < i; ++j) {
      if (is_subset(phis[j], phis[i])) rec.psi.push_back(j);
    }
    rec.label = rec.psi.empty() ? EqLabel::S : EqLabel::C;
    out.push_back(std::move(rec));
  }
  return out;
}

RowVec embed_row(const RowVec& sub_row, const std::vector<int>& supp, int n) {
  if (static_cast<int>(supp.size()) != sub_row.cols()) {
    raise(Errc::length_mismatch, "support size does not match sub-row width");
  }
  RowVec out = RowVec::Zero(n);
  int prev = -1;
  for (size_t k = 0; k < supp.size(); ++k) {
    const int j = supp[k];
    if (j < 0 || j >= n) {
      raise(Errc::support_out_of_range, "column index " + std::to_string(j) +
                                            " outside [0, " + std::to_string(n) + ")");
    }
    if (j <= prev) {
      raise(Errc::support_out_of_range, "support must be strictly ascending");
    }
    prev = j;
    out(j) = sub_row(static_cast<Eigen::Index>(k));
  }
  return out;
}

ConstraintModel make_model(Mat a) {
  require_finite(a, "constraint matrix");
  if (a.rows() >= a.cols()) {
    raise(Errc::invalid_argument, "constraint matrix must have fewer rows than columns");
  }
  if (numeric_rank(a) != a.rows()) {
    raise(Errc::rank_deficient, "constraint matrix rows are not independent");
  }
  return ConstraintModel{std::move(a), std::nullopt};
}

ConstraintModel make_model(Mat a, StructureMask mask) {
  if (a.rows() != mask.rows() || a.cols() != mask.cols()) {
    raise(Errc::shape_mismatch, "matrix and mask dimensions differ");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!mask.at(static_cast<int>(i), static_cast<int>(j)) && a(i, j) != 0.0) {
        raise(Errc::invalid_argument,
              "matrix has a non-zero entry at (" + std::to_string(i + 1) + "," +
                  std::to_string(j + 1) + ") outside the mask support");
      }
    }
  }
  ConstraintModel model = make_model(std::move(a));
  model.mask = std::move(mask);
  return model;
}

}  // namespace structpca
