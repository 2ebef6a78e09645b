#include "towercalc/linalg.hpp"

#include <algorithm>

#include "towercalc/error.hpp"

namespace towercalc {

RowEchelon::RowEchelon(int ncols, int pivot_limit)
    : ncols_(ncols), limit_(pivot_limit < 0 ? ncols : pivot_limit), pivot_row_(ncols, -1) {}

SparseRow RowEchelon::reduce_row(const SparseRow& row) const {
  // Sparse accumulator kept sorted; pivot rows only carry columns to the
  // right of their pivot, so a single left-to-right sweep suffices.
  SparseRow acc = row;
  SparseRow next;
  std::size_t pos = 0;
  while (pos < acc.size()) {
    const int col = acc[pos].first;
    const int pr = col < limit_ ? pivot_row_[col] : -1;
    if (pr < 0) {
      ++pos;
      continue;
    }
    const Rational f = acc[pos].second;
    const SparseRow& p = rows_[pr];
    next.clear();
    next.reserve(acc.size() + p.size());
    for (std::size_t i = 0; i < pos; ++i) next.push_back(std::move(acc[i]));
    std::size_t i = pos, j = 0;
    while (i < acc.size() || j < p.size()) {
      if (j == p.size() || (i < acc.size() && acc[i].first < p[j].first)) {
        next.push_back(std::move(acc[i++]));
      } else if (i == acc.size() || p[j].first < acc[i].first) {
        next.emplace_back(p[j].first, -f * p[j].second);
        ++j;
      } else {
        Rational v = acc[i].second - f * p[j].second;
        if (sgn(v) != 0) next.emplace_back(acc[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    acc.swap(next);
  }
  return acc;
}

bool RowEchelon::add_row(const SparseRow& row) {
  SparseRow r = reduce_row(row);
  if (r.empty()) return false;
  const int lead = r.front().first;
  if (lead >= limit_) {
    inconsistent_.push_back(std::move(r));
    return false;
  }
  const Rational inv = 1 / r.front().second;
  if (inv != 1)
    for (auto& [c, v] : r) v *= inv;
  pivot_row_[lead] = static_cast<int>(rows_.size());
  pivot_cols_.push_back(lead);
  rows_.push_back(std::move(r));
  reduced_ = false;
  return true;
}

void RowEchelon::reduce() {
  if (reduced_) return;
  // Order pivots left to right, then clear entries above each pivot from the
  // right so every row is touched by already-reduced rows only.
  std::vector<int> order(rows_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pivot_cols_[a] < pivot_cols_[b]; });
  std::vector<SparseRow> sorted;
  sorted.reserve(rows_.size());
  for (int i : order) sorted.push_back(std::move(rows_[i]));
  rows_ = std::move(sorted);
  pivot_cols_.clear();
  std::fill(pivot_row_.begin(), pivot_row_.end(), -1);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    pivot_cols_.push_back(rows_[i].front().first);
    pivot_row_[rows_[i].front().first] = static_cast<int>(i);
  }
  for (int i = static_cast<int>(rows_.size()) - 1; i >= 0; --i) {
    SparseRow head{rows_[i].front()};
    SparseRow tail(rows_[i].begin() + 1, rows_[i].end());
    // Rows below i are already reduced, so reducing the tail uses them only.
    const int saved = pivot_row_[pivot_cols_[i]];
    pivot_row_[pivot_cols_[i]] = -1;
    SparseRow t = reduce_row(tail);
    pivot_row_[pivot_cols_[i]] = saved;
    head.insert(head.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
    rows_[i] = std::move(head);
  }
  reduced_ = true;
}

std::vector<SparseRow> RowEchelon::kernel() const {
  if (!reduced_) throw TowerError(ErrorKind::consistency_failure, "kernel requested before reduction");
  std::vector<SparseRow> out;
  for (int f = 0; f < limit_; ++f) {
    if (pivot_row_[f] >= 0) continue;
    std::vector<std::pair<int, Rational>> v;
    v.emplace_back(f, Rational(1));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto& row = rows_[r];
      auto it = std::lower_bound(row.begin(), row.end(), f,
                                 [](const std::pair<int, Rational>& e, int c) { return e.first < c; });
      if (it != row.end() && it->first == f) v.emplace_back(pivot_cols_[r], -it->second);
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<SparseRow> RowEchelon::particular_solutions() const {
  if (!reduced_) throw TowerError(ErrorKind::consistency_failure, "solution requested before reduction");
  std::vector<SparseRow> out(ncols_ - limit_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [c, v] : rows_[r]) {
      if (c < limit_) continue;
      out[c - limit_].emplace_back(pivot_cols_[r], v);
    }
  }
  for (auto& v : out)
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<SparseRow> canonical_span_basis(const std::vector<SparseRow>& vectors, int ncols) {
  RowEchelon e(ncols);
  for (const auto& v : vectors) e.add_row(v);
  e.reduce();
  return e.rows();
}

std::vector<SparseRow> kernel_basis(const std::vector<SparseRow>& rows, int ncols) {
  RowEchelon e(ncols);
  for (const auto& r : rows) e.add_row(r);
  e.reduce();
  return canonical_span_basis(e.kernel(), ncols);
}

Rational determinant(DenseMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

bool solve_square(DenseMatrix a, DenseMatrix b, DenseMatrix& x) {
  const std::size_t n = a.size();
  const std::size_t m = b.empty() ? 0 : b.front().size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    const Rational inv = 1 / a[c][c];
    for (std::size_t k = c; k < n; ++k) a[c][k] *= inv;
    for (std::size_t k = 0; k < m; ++k) b[c][k] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      for (std::size_t k = 0; k < m; ++k) b[r][k] -= f * b[c][k];
    }
  }
  x = std::move(b);
  return true;
}

Rational dot(const SparseRow& a, const SparseRow& b) {
  Rational s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (b[j].first < a[i].first) ++j;
    else s += a[i++].second * b[j++].second;
  }
  return s;
}

}  // namespace towercalc
