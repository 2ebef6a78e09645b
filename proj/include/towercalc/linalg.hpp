#pragma once

#include <utility>
#include <vector>

#include "towercalc/rational.hpp"

namespace towercalc {

/// Sparse row: (column, value) pairs with increasing columns and nonzero values.
using SparseRow = std::vector<std::pair<int, Rational>>;
using DenseMatrix = std::vector<std::vector<Rational>>;

/// Incremental exact row echelon form over the rationals.
///
/// Rows are reduced against existing pivots on insertion; pivots are the
/// leftmost nonzero column and are scaled to one. Pivots may be restricted to
/// the first `pivot_limit` columns, the remaining columns then act as
/// right-hand sides.
class RowEchelon {
 public:
  explicit RowEchelon(int ncols, int pivot_limit = -1);

  /// Returns false if the row reduced to zero. A row whose reduction is
  /// nonzero only beyond the pivot limit is recorded as inconsistent.
  bool add_row(const SparseRow& row);

  int rank() const { return static_cast<int>(rows_.size()); }
  int ncols() const { return ncols_; }
  bool consistent() const { return inconsistent_.empty(); }
  /// Residual right-hand-side parts of rows that had no pivot.
  const std::vector<SparseRow>& inconsistent_rows() const { return inconsistent_; }

  /// Brings the pivot rows to reduced form (zeros above every pivot).
  void reduce();

  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<int>& pivot_columns() const { return pivot_cols_; }
  bool is_pivot(int col) const { return pivot_row_[col] >= 0; }

  /// Kernel of the matrix restricted to pivot columns, one vector per free
  /// column in increasing order (requires reduce()).
  std::vector<SparseRow> kernel() const;

  /// Solution with free variables set to zero, one per right-hand-side
  /// column (requires reduce() and consistency).
  std::vector<SparseRow> particular_solutions() const;

 private:
  SparseRow reduce_row(const SparseRow& row) const;

  int ncols_;
  int limit_;
  std::vector<SparseRow> rows_;
  std::vector<int> pivot_cols_;
  std::vector<int> pivot_row_;
  std::vector<SparseRow> inconsistent_;
  bool reduced_ = false;
};

/// Canonical basis of the span of the given vectors: fully reduced echelon
/// rows with leftmost unit pivots.
std::vector<SparseRow> canonical_span_basis(const std::vector<SparseRow>& vectors, int ncols);

/// Kernel of the matrix with the given rows, in canonical form.
std::vector<SparseRow> kernel_basis(const std::vector<SparseRow>& rows, int ncols);

Rational determinant(DenseMatrix a);

/// Solves a X = b exactly for square nonsingular a; returns false if singular.
bool solve_square(DenseMatrix a, DenseMatrix b, DenseMatrix& x);

Rational dot(const SparseRow& a, const SparseRow& b);

}  // namespace towercalc
