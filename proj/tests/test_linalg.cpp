#include <doctest.h>

#include <random>

#include "towercalc/linalg.hpp"

using namespace towercalc;

namespace {

SparseRow sparse(const std::vector<Rational>& dense) {
  SparseRow r;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (sgn(dense[i]) != 0) r.emplace_back(static_cast<int>(i), dense[i]);
  return r;
}

std::vector<Rational> evaluate_rows(const std::vector<SparseRow>& rows, const SparseRow& v) {
  std::vector<Rational> out;
  for (const auto& r : rows) out.push_back(dot(r, v));
  return out;
}

}  // namespace

TEST_CASE("kernel of a small matrix") {
  // [1 2 3; 2 4 6] has a two dimensional kernel.
  std::vector<SparseRow> rows = {sparse({1, 2, 3}), sparse({2, 4, 6})};
  auto ker = kernel_basis(rows, 3);
  REQUIRE(ker.size() == 2);
  for (const auto& v : ker) {
    for (const auto& x : evaluate_rows(rows, v)) CHECK(x == 0);
    CHECK(v.front().second == 1);
  }
  CHECK(ker[0].front().first < ker[1].front().first);
}

TEST_CASE("random systems: rank-nullity and solution residuals") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> val(-3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 4 + trial % 5, n = 6;
    std::vector<SparseRow> rows;
    for (int i = 0; i < m; ++i) {
      std::vector<Rational> d(n);
      for (auto& x : d) x = val(rng) * (val(rng) > 0 ? 1 : 0);
      rows.push_back(sparse(d));
    }
    RowEchelon e(n);
    for (const auto& r : rows) e.add_row(r);
    e.reduce();
    auto ker = e.kernel();
    CHECK(e.rank() + static_cast<int>(ker.size()) == n);
    for (const auto& v : ker)
      for (const auto& x : evaluate_rows(rows, v)) CHECK(x == 0);

    // Right-hand side built from a known vector.
    std::vector<Rational> xs(n);
    for (auto& x : xs) x = make_rational(val(rng), 2);
    RowEchelon aug(n + 1, n);
    for (const auto& r : rows) {
      SparseRow a = r;
      Rational b = dot(r, sparse(xs));
      if (sgn(b) != 0) a.emplace_back(n, b);
      aug.add_row(a);
    }
    REQUIRE(aug.consistent());
    aug.reduce();
    auto sol = aug.particular_solutions();
    REQUIRE(sol.size() == 1);
    for (const auto& r : rows) CHECK(dot(r, sol[0]) == dot(r, sparse(xs)));
  }
}

TEST_CASE("inconsistent systems are detected") {
  RowEchelon e(3, 2);
  e.add_row(sparse({1, 1, 1}));
  e.add_row(sparse({2, 2, 3}));
  CHECK_FALSE(e.consistent());
}

TEST_CASE("determinant and square solve") {
  DenseMatrix a = {{2, 1}, {1, 3}};
  CHECK(determinant(a) == 5);
  DenseMatrix b = {{1}, {2}};
  DenseMatrix x;
  REQUIRE(solve_square(a, b, x));
  CHECK(x[0][0] == Rational(1, 5));
  CHECK(x[1][0] == Rational(3, 5));
  DenseMatrix s = {{1, 2}, {2, 4}};
  CHECK(determinant(s) == 0);
  CHECK_FALSE(solve_square(s, b, x));
}
