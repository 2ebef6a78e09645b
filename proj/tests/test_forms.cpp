#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "towercalc/coords.hpp"
#include "towercalc/error.hpp"
#include "towercalc/forms.hpp"

using namespace towercalc;
using towercalc::testing::random_form;

namespace {

RadialRingElement one(int N) { return RadialRingElement::constant(N, 1); }
RadialRingElement x(int N, int i) { return RadialRingElement::coordinate(N, i - 1); }
Form dx(int N, std::initializer_list<int> idx, const RadialRingElement& c) {
  return Form::basis(N, indices_to_mask(std::vector<int>(idx)), c);
}

// Sign of the permutation sorting seq, by counting inversions.
int perm_sign(const std::vector<int>& seq) {
  int inv = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

// Componentwise codifferential: f dx^I -> sum_{i in I} (-1)^{pos(i)} d_i f dx^{I \ i}.
Form codifferential_oracle(const Form& f) {
  Form out(f.dimension(), f.grade() - 1);
  for (const auto& [I, a] : f.components()) {
    auto idx = mask_to_indices(I);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      RadialRingElement d = a.partial(idx[p] - 1);
      out.add_component(I & ~(1u << (idx[p] - 1)), p % 2 ? -d : d);
    }
  }
  return out;
}

Form euler_form(int N) {
  Form e(N, 1);
  for (int i = 1; i <= N; ++i) e += dx(N, {i}, x(N, i));
  return e;
}

}  // namespace

TEST_CASE("wedge examples and graded commutativity") {
  const int N = 3;
  CHECK(wedge(dx(N, {1}, one(N)), dx(N, {2}, one(N))) == dx(N, {1, 2}, one(N)));
  CHECK(wedge(dx(N, {1}, one(N)), dx(N, {1}, one(N))).is_zero());
  CHECK(wedge(dx(N, {2}, x(N, 1)), dx(N, {1}, x(N, 2))) == dx(N, {1, 2}, -(x(N, 1) * x(N, 2))));

  std::mt19937 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const int N5 = 5;
    Form a = random_form(rng, N5, 1 + trial % 2, 2);
    Form b = random_form(rng, N5, 2, 2);
    Form c = random_form(rng, N5, 1, 2);
    const int sign = (a.grade() * b.grade()) % 2 ? -1 : 1;
    CHECK(wedge(a, b) == wedge(b, a) * Rational(sign));
    CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
  }
}

TEST_CASE("hodge star orientation and double star sign") {
  const int N = 3;
  CHECK(hodge_star(dx(N, {1}, one(N))) == dx(N, {2, 3}, one(N)));
  CHECK(hodge_star(Form::scalar(N, one(N))) == dx(N, {1, 2, 3}, one(N)));
  for (int n : {3, 5}) {
    for (int q = 0; q <= n; ++q) {
      for (IndexMask I : masks_of_grade(n, q)) {
        Form f = Form::basis(n, I, one(n));
        Form s = hodge_star(f);
        REQUIRE(s.components().size() == 1);
        // Brute force: dx^I ^ *dx^I must be the volume form.
        auto idx = mask_to_indices(I);
        auto comp = mask_to_indices(s.components().begin()->first);
        std::vector<int> seq = idx;
        seq.insert(seq.end(), comp.begin(), comp.end());
        CHECK(s.components().begin()->second == one(n) * Rational(perm_sign(seq)));
        const int sign = (q * (n - q)) % 2 ? -1 : 1;
        CHECK(hodge_star(s) == f * Rational(sign));
      }
    }
  }
}

TEST_CASE("rot examples") {
  const int N = 3;
  CHECK(rot(dx(N, {2}, x(N, 1))) == dx(N, {1, 2}, one(N)));
  Form expected = dx(N, {1, 2}, RadialRingElement::radius_power(N, -3) * x(N, 2)) +
                  dx(N, {1, 3}, RadialRingElement::radius_power(N, -3) * x(N, 3));
  CHECK(rot(dx(N, {1}, RadialRingElement::radius_power(N, -1))) == expected);
  CHECK_THROWS_AS(rot(dx(N, {1, 2, 3}, one(N))), TowerError);
}

TEST_CASE("div matches the componentwise codifferential") {
  const int N = 3;
  Form div_euler = div(euler_form(N));
  CHECK(div_euler == Form::scalar(N, RadialRingElement::constant(N, 3)));
  CHECK(codifferential_oracle(euler_form(N)) == div_euler);
  CHECK(div(dx(N, {1, 2}, one(N))).is_zero());
  CHECK_THROWS_AS(div(Form::scalar(N, one(N))), TowerError);
  std::mt19937 rng(31);
  for (int n : {3, 5}) {
    for (int q = 1; q <= n; ++q) {
      Form f = random_form(rng, n, q, 3);
      CHECK(div(f) == codifferential_oracle(f));
    }
  }
}

TEST_CASE("complexes: rot rot = 0, div div = 0, laplacian identity") {
  std::mt19937 rng(41);
  for (int n : {3, 5}) {
    for (int q = 0; q <= n; ++q) {
      Form f = random_form(rng, n, q, 3);
      if (q + 2 <= n) CHECK(rot(rot(f)).is_zero());
      if (q >= 2) CHECK(div(div(f)).is_zero());
      CHECK_NOTHROW(laplacian(f));
    }
  }
}

TEST_CASE("laplacian examples") {
  const int N = 3;
  Polynomial h = Polynomial::monomial(N, Monomial{{2, 0, 0}}, 1) - Polynomial::monomial(N, Monomial{{0, 2, 0}}, 1);
  CHECK(laplacian(Form::scalar(N, RadialRingElement::from_polynomial(h))).is_zero());
  for (int n : {3, 5}) CHECK(laplacian(Form::scalar(n, RadialRingElement::radius_power(n, 2 - n))).is_zero());
  CHECK(laplacian(dx(N, {1}, x(N, 1) * x(N, 1))) == dx(N, {1}, RadialRingElement::constant(N, 2)));
}

TEST_CASE("radial operators") {
  const int N = 3;
  CHECK(R_op(Form::scalar(N, one(N))) == euler_form(N));
  CHECK(T_op(euler_form(N)) == Form::scalar(N, RadialRingElement::radius_power(N, 2)));
  std::mt19937 rng(51);
  for (int n : {3, 5}) {
    RadialRingElement r2 = RadialRingElement::radius_power(n, 2);
    for (int q = 0; q <= n; ++q) {
      Form f = random_form(rng, n, q, 3);
      Form anti(n, q);
      if (q < n) anti += T_op(R_op(f));
      if (q > 0) anti += R_op(T_op(f));
      CHECK(anti == f.times(r2));
      if (q > 0) CHECK(div(f.times(r2)) - div(f).times(r2) == T_op(f) * Rational(2));
    }
  }
}

TEST_CASE("homogeneity split") {
  const int N = 3;
  Form f = dx(N, {1}, x(N, 1)) + dx(N, {2}, one(N));
  auto pieces = homogeneity_split(f);
  REQUIRE(pieces.size() == 2);
  CHECK(pieces.at(1) == dx(N, {1}, x(N, 1)));
  CHECK(pieces.at(0) == dx(N, {2}, one(N)));
  CHECK(homogeneity_split(Form(N, 1)).empty());
  std::mt19937 rng(61);
  Form g = random_form(rng, 5, 2, 4);
  Form sum(5, 2);
  for (const auto& [d, piece] : homogeneity_split(g)) {
    CHECK(piece.degrees() == std::vector<int>{d});
    sum += piece;
  }
  CHECK(sum == g);
}

TEST_CASE("sphere inner products") {
  const int N = 3;
  Form x1sq = Form::scalar(N, x(N, 1) * x(N, 1));
  Form unit = Form::scalar(N, one(N));
  CHECK(sphere_inner_product(x1sq, unit) == Rational(1, 3));
  Form x1q = Form::scalar(N, x(N, 1) * x(N, 1) * x(N, 1) * x(N, 1));
  CHECK(sphere_inner_product(x1q, unit) == Rational(1, 5));
  CHECK(sphere_inner_product(dx(N, {1}, one(N)), dx(N, {2}, one(N))) == 0);

  // Quadrature cross-check of the moment rule for x1^a x2^b x3^c on S^2.
  auto quad = [](int a, int b, int c) {
    const int nt = 400, np = 800;
    double s = 0;
    for (int i = 0; i < nt; ++i) {
      const double t = (i + 0.5) * std::numbers::pi / nt;
      for (int j = 0; j < np; ++j) {
        const double p = (j + 0.5) * 2 * std::numbers::pi / np;
        const double v = std::pow(std::sin(t) * std::cos(p), a) * std::pow(std::sin(t) * std::sin(p), b) *
                         std::pow(std::cos(t), c);
        s += v * std::sin(t);
      }
    }
    return s * (std::numbers::pi / nt) * (2 * std::numbers::pi / np) / (4 * std::numbers::pi);
  };
  for (auto [a, b, c] : {std::tuple{4, 0, 0}, {2, 2, 0}, {2, 2, 2}, {6, 0, 2}, {1, 1, 0}, {3, 0, 1}}) {
    Monomial m{{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c)}};
    CHECK(sphere_moment(3, m).get_d() == doctest::Approx(quad(a, b, c)).epsilon(1e-6));
  }
}

TEST_CASE("sphere pairing is symmetric and positive definite on monomial bases") {
  for (int n : {3, 5}) {
    std::vector<Form> basis;
    for (int d = 0; d <= 3; d += 1)
      for (const Monomial& m : monomials_of_degree(n, d))
        if (m.exp[0] <= 1) basis.push_back(Form::basis(n, 1u, RadialRingElement::from_polynomial(Polynomial::monomial(n, m, 1))));
    DenseMatrix g(basis.size(), std::vector<Rational>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        g[i][j] = sphere_inner_product(basis[i], basis[j]);
        if (j < i) CHECK(g[i][j] == g[j][i]);
      }
    // Leading principal minors positive (Sylvester).
    for (std::size_t k = 1; k <= basis.size(); k += 7) {
      DenseMatrix sub(k, std::vector<Rational>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i][j] = g[i][j];
      CHECK(determinant(sub) > 0);
    }
    CHECK(determinant(g) > 0);
  }
}

TEST_CASE("coordinate kernels agree with form operators") {
  std::mt19937 rng(71);
  for (int n : {3, 5}) {
    for (int q = 0; q <= n; ++q) {
      for (int h : {-n - 1, -2, 0, 3}) {
        for (std::uint32_t block : {0u, 5u, 3u}) {
          auto keys = ansatz_keys(n, q, h, block, 4, false);
          if (keys.empty()) continue;
          std::uniform_int_distribution<std::size_t> pick(0, keys.size() - 1);
          CoordVec v;
          for (int t = 0; t < 4; ++t) v.emplace_back(keys[pick(rng)], towercalc::testing::random_rational(rng));
          sort_coords(v);
          Form f = coords_to_form(n, q, h, v);
          CHECK(form_to_coords(f, h) == v);
          for (const auto& [k, c] : v) CHECK(block_of(k) == block);
          if (q < n) {
            CoordVec r;
            for (const auto& [k, c] : v)
              for (auto& [k2, c2] : rot_of_key(n, h, k)) r.emplace_back(k2, c * c2);
            sort_coords(r);
            CHECK(coords_to_form(n, q + 1, h - 1, r) == rot(f));
            for (const auto& [k, c] : r) CHECK(block_of(k) == block);
          }
          if (q > 0) {
            CoordVec d;
            for (const auto& [k, c] : v)
              for (auto& [k2, c2] : div_of_key(n, h, k)) d.emplace_back(k2, c * c2);
            sort_coords(d);
            CHECK(coords_to_form(n, q - 1, h - 1, d) == div(f));
          }
          CHECK(coord_inner(n, v, v) == sphere_inner_product(f, f));
        }
      }
    }
  }
}
