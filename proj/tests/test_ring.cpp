#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "towercalc/error.hpp"
#include "towercalc/ring.hpp"

using namespace towercalc;
using towercalc::testing::random_element;
using towercalc::testing::random_homogeneous;

namespace {

Monomial mono(std::initializer_list<int> e) {
  Monomial m;
  int i = 0;
  for (int x : e) m.exp[i++] = static_cast<std::uint8_t>(x);
  return m;
}

Polynomial poly(int N, std::initializer_list<std::pair<Monomial, Rational>> terms) {
  return Polynomial::from_terms(N, std::vector<Polynomial::Term>(terms.begin(), terms.end()));
}

// Divisibility oracle: the sum of squares is irreducible for N >= 3, so it
// divides P iff P vanishes on the affine quadric over F_13 (13 = 1 mod 4 has
// plenty of points). Exhaustive over F_13^3.
bool vanishes_on_quadric_mod13(const Polynomial& p) {
  const long mod = 13;
  for (long a = 0; a < mod; ++a)
    for (long b = 0; b < mod; ++b)
      for (long c = 0; c < mod; ++c) {
        if ((a * a + b * b + c * c) % mod != 0) continue;
        long acc = 0;
        for (const auto& [m, coef] : p.terms()) {
          long v = 1;
          const long x[3] = {a, b, c};
          for (int i = 0; i < 3; ++i)
            for (int e = 0; e < m.exp[i]; ++e) v = v * x[i] % mod;
          BigInt num = coef.get_num() % mod;
          BigInt den = coef.get_den() % mod;
          long inv = 1;
          for (int e = 0; e < mod - 2; ++e) inv = inv * den.get_si() % mod;
          acc = (acc + num.get_si() * inv % mod * v) % mod;
        }
        if ((acc % mod + mod) % mod != 0) return false;
      }
  return true;
}

double eval(const RadialRingElement& e, const std::vector<double>& x) {
  double r2 = 0;
  for (double v : x) r2 += v * v;
  const double r = std::sqrt(r2);
  double s = 0;
  for (const auto& [k, p] : e.parts()) {
    double ps = 0;
    for (const auto& [m, c] : p.poly.terms()) {
      double t = c.get_d();
      for (std::size_t i = 0; i < x.size(); ++i) t *= std::pow(x[i], m.exp[i]);
      ps += t;
    }
    s += std::pow(r, p.r_exp) * ps;
  }
  return s;
}

}  // namespace

TEST_CASE("canonicalize absorbs the defining relation") {
  const int N = 3;
  HomogeneousPart p = canonicalize(0, Polynomial::radial_square(N));
  CHECK(p.r_exp == 2);
  CHECK(p.degree == 2);
  CHECK(p.poly == Polynomial::constant(N, 1));

  HomogeneousPart q = canonicalize(-5, Polynomial::variable(N, 0));
  CHECK(q.r_exp == -5);
  CHECK(q.poly == Polynomial::variable(N, 0));
}

TEST_CASE("canonicalize keeps a sum of squares free representative") {
  const int N = 3;
  Polynomial x2 = Polynomial::variable(N, 1);
  Polynomial input = Polynomial::radial_square(N) * x2 + poly(N, {{mono({2, 1, 0}), 1}});
  RadialRingElement e = RadialRingElement::from_part(N, 0, input);
  RadialRingElement expected = RadialRingElement::from_part(N, 2, x2) +
                               RadialRingElement::from_part(N, 0, poly(N, {{mono({2, 1, 0}), 1}}));
  CHECK(e == expected);
  REQUIRE(e.parts().size() == 1);
  const HomogeneousPart& part = e.parts().begin()->second;
  CHECK(part.degree == 3);
  CHECK_FALSE(vanishes_on_quadric_mod13(part.poly));
  // Idempotent.
  CHECK(canonicalize(part.r_exp, part.poly) == part);
}

TEST_CASE("canonicalize rejects non-homogeneous input") {
  Polynomial p = Polynomial::variable(3, 0) + Polynomial::constant(3, 1);
  CHECK_THROWS_AS(canonicalize(0, p), TowerError);
}

TEST_CASE("divisibility agrees with the finite-field oracle") {
  std::mt19937 rng(11);
  const int N = 3;
  for (int trial = 0; trial < 40; ++trial) {
    Polynomial p = random_homogeneous(rng, N, 1 + trial % 4, 3);
    if (trial % 2 == 0) p = p.times_radial_square(1);
    CHECK(p.divisible_by_radial_square() == vanishes_on_quadric_mod13(p));
  }
}

TEST_CASE("representatives related by r^2 rewrites canonicalize identically") {
  std::mt19937 rng(7);
  for (int N : {3, 5}) {
    for (int trial = 0; trial < 30; ++trial) {
      std::uniform_int_distribution<int> bd(-6, 4), dd(0, 4);
      const int b = bd(rng);
      Polynomial a = random_homogeneous(rng, N, dd(rng), 4);
      Polynomial c = random_homogeneous(rng, N, a.is_zero() ? 2 : a.degree(), 3);
      // r^b (a + c) written with part of it moved across r^2 = sum x^2.
      RadialRingElement direct = RadialRingElement::from_part(N, b, a + c);
      RadialRingElement split = RadialRingElement::from_part(N, b, a) +
                                RadialRingElement::from_part(N, b - 2, c.times_radial_square(1));
      RadialRingElement lifted = RadialRingElement::from_part(N, b + 2, a) * RadialRingElement::radius_power(N, -2) +
                                 RadialRingElement::from_part(N, b, c);
      CHECK(direct == split);
      CHECK(direct == lifted);
    }
  }
}

TEST_CASE("radial derivative examples") {
  const int N = 3;
  RadialRingElement rinv = RadialRingElement::radius_power(N, -1);
  CHECK(rinv.partial(0) == -(RadialRingElement::radius_power(N, -3) * RadialRingElement::coordinate(N, 0)));
  RadialRingElement r = RadialRingElement::radius_power(N, 1);
  CHECK(r * r == RadialRingElement::from_polynomial(Polynomial::radial_square(N)));
  RadialRingElement r2x2 = RadialRingElement::radius_power(N, 2) * RadialRingElement::coordinate(N, 1);
  CHECK(r2x2.partial(0) == RadialRingElement::from_polynomial(poly(N, {{mono({1, 1, 0}), 2}})));
}

TEST_CASE("partial derivatives commute and match finite differences") {
  std::mt19937 rng(3);
  const int N = 3;
  const std::vector<double> x = {0.3, -0.7, 0.5};
  for (int trial = 0; trial < 25; ++trial) {
    RadialRingElement e = random_element(rng, N, 3);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) CHECK(e.partial(i).partial(j) == e.partial(j).partial(i));
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (eval(e, xp) - eval(e, xm)) / (2 * h);
      CHECK(eval(e.partial(i), x) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("multiplication respects the grading and ring axioms") {
  std::mt19937 rng(5);
  const int N = 5;
  for (int trial = 0; trial < 20; ++trial) {
    RadialRingElement a = random_element(rng, N, 1);
    RadialRingElement b = random_element(rng, N, 1);
    RadialRingElement c = random_element(rng, N, 2);
    RadialRingElement ab = a * b;
    if (!a.is_zero() && !b.is_zero()) {
      for (int d : ab.degrees()) CHECK(d == a.degrees().front() + b.degrees().front());
    }
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("reduced coordinates round-trip") {
  std::mt19937 rng(9);
  const int N = 3;
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> bd(-5, 3), dd(0, 4);
    const int b = bd(rng);
    Polynomial p = random_homogeneous(rng, N, dd(rng), 4);
    if (p.is_zero()) continue;
    HomogeneousPart part = canonicalize(b, p);
    auto terms = reduced_terms(part);
    for (const auto& [m, c] : terms) CHECK(m.exp[0] <= 1);
    CHECK(RadialRingElement::from_reduced(N, part.degree, terms) == RadialRingElement::from_part(N, b, p));
  }
}

TEST_CASE("ring JSON round-trip") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    RadialRingElement e = random_element(rng, 3, 3);
    auto j = to_json(e);
    CHECK(ring_from_json(3, j) == e);
    for (const auto& part : j) {
      CHECK(part.contains("degree"));
      CHECK(part.contains("r_exp"));
      CHECK(part.contains("terms"));
    }
  }
}

TEST_CASE("parse rationals") {
  CHECK(parse_rational("5/2") == Rational(5, 2));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(parse_rational("2.25") == Rational(9, 4));
  CHECK(parse_rational("-0.5") == Rational(-1, 2));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), TowerError);
  CHECK_THROWS_AS(parse_rational("abc"), TowerError);
  CHECK(to_string(make_rational(-3, 6)) == "-1/2");
  CHECK(to_string(Rational(4)) == "4");
  CHECK(floor_to_long(Rational(-1, 2)) == -1);
}
