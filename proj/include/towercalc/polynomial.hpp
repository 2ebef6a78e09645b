#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "towercalc/rational.hpp"

namespace towercalc {

/// Largest supported ambient dimension.
inline constexpr int kMaxDim = 9;

/// Exponent vector x_1^{e_1} ... x_N^{e_N}. Unused slots stay zero.
struct Monomial {
  std::array<std::uint8_t, kMaxDim> exp{};

  int degree() const {
    int d = 0;
    for (auto e : exp) d += e;
    return d;
  }
  /// Bit i set iff exponent of x_{i+1} is odd.
  std::uint32_t parity_mask() const {
    std::uint32_t m = 0;
    for (int i = 0; i < kMaxDim; ++i)
      if (exp[i] & 1u) m |= 1u << i;
    return m;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

/// Graded lexicographic order with x_1 > x_2 > ... ; "less" means smaller in
/// that order. Containers keyed by monomials iterate from the smallest term.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    for (int i = 0; i < kMaxDim; ++i)
      if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i];
    return false;
  }
};

/// Sparse multivariate polynomial over the rationals in N variables.
/// Terms are kept sorted by GrlexLess with no zero coefficients.
class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : n_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int i);  // x_{i+1}, zero-based i
  static Polynomial monomial(int nvars, const Monomial& m, const Rational& c);
  /// x_1^2 + ... + x_N^2
  static Polynomial radial_square(int nvars);

  int nvars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  /// Degree of the highest term; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : terms_.back().first.degree(); }
  int min_degree() const { return terms_.empty() ? -1 : terms_.front().first.degree(); }
  bool is_homogeneous() const { return degree() == min_degree(); }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  Polynomial operator-() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// Multiply by a monomial with coefficient.
  Polynomial times(const Monomial& m, const Rational& c) const;
  /// Multiply by x_{i+1}.
  Polynomial times_variable(int i) const;
  /// d/dx_{i+1}
  Polynomial partial(int i) const;
  /// (x_1^2 + ... + x_N^2)^power
  Polynomial times_radial_square(int power) const;

  /// Writes p = quotient * (x_1^2 + ... + x_N^2) + remainder where no
  /// remainder term has x_1-exponent above one. The remainder is zero iff the
  /// sum of squares divides p.
  void divide_by_radial_square(Polynomial& quotient, Polynomial& remainder) const;
  bool divisible_by_radial_square() const;

  /// Coefficient of a monomial (zero if absent).
  Rational coefficient(const Monomial& m) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

  /// Builds from an unsorted term list, summing duplicates.
  static Polynomial from_terms(int nvars, std::vector<Term> terms);

 private:
  int n_ = 0;
  std::vector<Term> terms_;
};

/// Accumulates terms in arbitrary order before freezing into a Polynomial.
class PolynomialBuilder {
 public:
  explicit PolynomialBuilder(int nvars) : n_(nvars) {}
  void add(const Monomial& m, const Rational& c);
  void add(const Polynomial& p, const Rational& scale = 1);
  Polynomial build();

 private:
  int n_;
  std::map<Monomial, Rational, GrlexLess> acc_;
};

/// Average of x^alpha over the unit sphere S^{N-1}:
/// prod (2 b_i - 1)!! / (N (N+2) ... (N + 2|b| - 2)) for alpha = 2b, zero if
/// any exponent is odd.
Rational sphere_moment(int nvars, const Monomial& alpha);

/// Sphere average of a polynomial.
Rational sphere_average(const Polynomial& p);

/// Sphere average of the product p*q without forming the product.
Rational sphere_average_product(const Polynomial& p, const Polynomial& q);

/// All monomials of total degree d in n variables (grlex ascending).
std::vector<Monomial> monomials_of_degree(int nvars, int degree);

}  // namespace towercalc
