#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "towercalc/error.hpp"
#include "towercalc/harmonic_spaces.hpp"
#include "towercalc/towers.hpp"

using namespace towercalc;

namespace {

RadialRingElement xi(int N, int i) { return RadialRingElement::coordinate(N, i - 1); }
RadialRingElement rp(int N, int b) { return RadialRingElement::radius_power(N, b); }

template <class F>
ErrorKind error_of(F&& f) {
  try {
    f();
  } catch (const TowerError& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::invalid_input;
}

// Gamma-ratio formula evaluated in floating point.
double alpha_float(Sign sign, int q, int sigma, int k, int N) {
  const double a = sign == Sign::plus ? 1.0 + N / 2.0 + sigma : 1.0 - N / 2.0 - sigma;
  // Gamma(a)/Gamma(a+k) = 1 / prod_{j<k} (a + j); avoids poles of lgamma signs.
  double ratio = 1;
  for (int j = 0; j < k; ++j) ratio /= a + j;
  double v = ratio / (std::pow(4.0, k) * std::tgamma(k + 1.0));
  if (sign == Sign::plus) v *= ((1 + (q == 0) + (q == N)) % 2 ? -1.0 : 1.0) / (2.0 * sigma + N);
  return v;
}

}  // namespace

TEST_CASE("homogeneity degree") {
  CHECK(homogeneity_degree({Sign::plus, 2, 1, 1}, 3) == 3);
  CHECK(homogeneity_degree({Sign::minus, 0, 0, 1}, 3) == -3);
  CHECK(homogeneity_degree({Sign::minus, 3, 1, 1}, 5) == -3);
}

TEST_CASE("alpha examples") {
  for (int q = 0; q <= 3; ++q)
    for (int s = 0; s <= 3; ++s) CHECK(alpha(Sign::minus, q, s, 0, 3) == 1);
  CHECK(alpha(Sign::plus, 1, 0, 0, 3) == make_rational(-1, 3));
  CHECK(alpha(Sign::plus, 0, 0, 0, 3) == make_rational(1, 3));
  CHECK(alpha(Sign::plus, 3, 2, 0, 3) == make_rational(1, 7));
  for (int N : {3, 5})
    for (int s = 0; s <= 3; ++s) CHECK(alpha(Sign::minus, 1, s, 1, N) == make_rational(1, 2 * (2 - 2 * s - N)));
}

TEST_CASE("alpha recursion equals the closed form") {
  for (int N : {3, 5, 7})
    for (Sign sign : {Sign::plus, Sign::minus})
      for (int q : {0, 1, N})
        for (int s = 0; s <= 5; ++s)
          for (int k = 0; k <= 10; ++k) {
            const Rational a = alpha(sign, q, s, k, N);
            CHECK(a == alpha_closed_form(sign, q, s, k, N));
            const double f = alpha_float(sign, q, s, k, N);
            CHECK(std::abs(a.get_d() - f) <= 1e-12 * std::abs(f));
          }
}

TEST_CASE("alpha in even dimensions") {
  CHECK(alpha(Sign::plus, 1, 0, 3, 4) == alpha_closed_form(Sign::plus, 1, 0, 3, 4));
  CHECK(alpha(Sign::minus, 1, 0, 1, 4) == make_rational(1, 2 * (2 - 4)));
  CHECK(error_of([] { alpha(Sign::minus, 1, 0, 2, 4); }) == ErrorKind::unsupported_dimension);
  CHECK(error_of([] { alpha(Sign::minus, 1, 1, 3, 4); }) == ErrorKind::unsupported_dimension);
  CHECK(error_of([] { alpha_closed_form(Sign::minus, 1, 0, 1, 4); }) == ErrorKind::unsupported_dimension);
}

TEST_CASE("scalar families by hand") {
  const int N = 3;
  auto plus = build_tower_pair(N, 0, Sign::plus, 0, 2);
  REQUIRE(plus.D[0].size() == 1);
  CHECK(plus.D[0][0] == Form::scalar(N, RadialRingElement::constant(N, 1)));
  Form xdx(N, 1);
  for (int i = 1; i <= N; ++i) xdx.add_component(indices_to_mask({i}), xi(N, i));
  REQUIRE(plus.R[1].size() == 1);
  CHECK(plus.R[1][0] == xdx * make_rational(1, 3));
  REQUIRE(plus.D[2].size() == 1);
  CHECK(plus.D[2][0] == Form::scalar(N, rp(N, 2) * make_rational(1, 6)));
  // R[2][0] lifts D[1][0] = x1: the gradient of x1 r^2 / 10.
  REQUIRE(plus.D[1][0] == Form::scalar(N, xi(N, 1)));
  Form phi = Form::scalar(N, xi(N, 1) * rp(N, 2) * make_rational(1, 10));
  CHECK(plus.R[2][0] == rot(phi));

  auto minus = build_tower_pair(N, 0, Sign::minus, 0, 2);
  CHECK(minus.D[0].empty());
  REQUIRE(minus.R[1].size() == 1);
  CHECK(minus.R[1][0] == xdx.times_r_power(-3));
  REQUIRE(minus.D[2].size() == 1);
  CHECK(minus.D[2][0] == Form::scalar(N, -rp(N, -1)));
}

TEST_CASE("defining relations") {
  auto f = build_tower_pair(3, 1, Sign::plus, 0, 2);
  for (std::size_t m = 0; m < f.D[1].size(); ++m) CHECK(rot(f.D[1][m]) == f.R[0][m]);
  auto g = build_tower_pair(3, 1, Sign::plus, 1, 3);
  for (const auto& floor : g.D)
    for (const auto& d : floor) CHECK(div(d).is_zero());
  CHECK(build_tower_pair(3, 0, Sign::minus, 0, 0).D[0].empty());
}

TEST_CASE("all N=3 families verify") {
  for (int q = 0; q <= 3; ++q)
    for (Sign sign : {Sign::plus, Sign::minus})
      for (int s = 0; s <= 2; ++s) {
        if (mu_or_zero(3, q, s) + mu_or_zero(3, q + 1, s) == 0) {
          CHECK(error_of([&] { build_tower_pair(3, q, sign, s, 3); }) == ErrorKind::invalid_input);
          continue;
        }
        auto fam = build_tower_pair(3, q, sign, s, 3);
        CHECK(fam.omega_sq == Rational((q + s) * (3 - q + s)));
        auto rep = verify_relations(fam);
        rep.merge(verify_low_floor_harmonicity(fam));
        rep.merge(verify_odd_floor_structure(fam));
        for (const auto& i : rep.failures()) FAIL_CHECK(i.relation << " " << i.location);
        for (int k = 0; k <= 3; ++k) {
          CHECK(static_cast<int>(fam.D[k].size()) == expected_D_count(3, q, sign, s, k));
          CHECK(static_cast<int>(fam.R[k].size()) == expected_R_count(3, q, sign, s, k));
        }
      }
}

TEST_CASE("floor multiplicities follow mu") {
  auto f = build_tower_pair(5, 1, Sign::minus, 1, 3);
  CHECK(f.D[0].size() == 14);
  CHECK(f.D[1].size() == 35);
  CHECK(f.R[0].size() == 35);
  CHECK(f.R[1].size() == 14);
  auto z = build_tower_pair(5, 4, Sign::minus, 0, 2);
  CHECK(z.R[0].empty());
  CHECK(z.D[1].size() == 1);
}

TEST_CASE("floor two is not harmonic") {
  auto f = build_tower_pair(3, 1, Sign::plus, 0, 2);
  for (const auto& d : f.D[2]) CHECK(!laplacian(d).is_zero());
  for (const auto& d : f.D[0]) CHECK(!T_op(d).is_zero());
}

TEST_CASE("linear independence across families of one degree") {
  // rank-1 forms of degree 2 from (+, sigma, k) with sigma + k = 2
  std::vector<Form> forms;
  for (int s = 0; s <= 2; ++s) {
    auto f = build_tower_pair(3, 1, Sign::plus, s, 2 - s);
    for (const auto& d : f.D[2 - s]) forms.push_back(d);
    auto g = build_tower_pair(3, 0, Sign::plus, s, 2 - s);
    if (2 - s >= 1)
      for (const auto& r : g.R[2 - s]) forms.push_back(r);
  }
  DenseMatrix gram(forms.size(), std::vector<Rational>(forms.size()));
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t j = 0; j < forms.size(); ++j) gram[i][j] = sphere_inner_product(forms[i], forms[j]);
  CHECK(sgn(determinant(gram)) != 0);
}

TEST_CASE("serial and parallel builds agree") {
  auto a = build_tower_pair(5, 2, Sign::minus, 0, 2, ExecPolicy::serial);
  auto b = build_tower_pair(5, 2, Sign::minus, 0, 2, ExecPolicy::parallel);
  CHECK(a.D == b.D);
  CHECK(a.R == b.R);
}

TEST_CASE("family json round trip and fault detection") {
  std::mt19937 rng(2024);
  auto fam = build_tower_pair(3, 1, Sign::minus, 1, 3);
  const auto j = to_json(fam);
  auto back = family_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.D == fam.D);
  CHECK(back.R == fam.R);
  CHECK(verify_relations(back).ok());
  for (int trial = 0; trial < 25; ++trial) {
    auto bad = j;
    const char* side = rng() % 2 ? "D_floors" : "R_floors";
    auto& floors = bad[side];
    auto& floor = floors[rng() % floors.size()];
    if (floor.empty()) {
      --trial;
      continue;
    }
    auto& comps = floor[rng() % floor.size()]["components"];
    auto it = comps.begin();
    std::advance(it, rng() % comps.size());
    auto& parts = *it;
    auto& terms = parts[rng() % parts.size()]["terms"];
    auto& coef = terms[rng() % terms.size()]["coef"];
    Rational delta = testing::random_rational(rng);
    if (sgn(delta) == 0) delta = 1;
    coef = to_string(parse_rational(coef.get<std::string>()) + delta);
    CHECK(!verify_relations(family_from_json(bad)).ok());
  }
}

TEST_CASE("build argument errors") {
  CHECK(error_of([] { build_tower_pair(4, 1, Sign::plus, 0, 1); }) == ErrorKind::unsupported_dimension);
  CHECK(error_of([] { build_tower_pair(3, 4, Sign::plus, 0, 1); }) == ErrorKind::invalid_input);
  CHECK(error_of([] { build_tower_pair(3, 1, Sign::plus, -1, 1); }) == ErrorKind::invalid_input);
  CHECK(error_of([] { family_from_json(nlohmann::json::object()); }) == ErrorKind::parse_error);
}

TEST_CASE("exceptional form tables") {
  for (int N : {3, 5, 7})
    for (int K = 1; K <= 3; ++K) {
      auto d = exceptional_form(ExceptionalKind::D_hat, N, 1, K);
      CHECK(!d.zero);
      CHECK(d.label == "-R^{1,1}_{0,1}");
    }
  CHECK(exceptional_form(ExceptionalKind::D_hat, 5, 2, 2).zero);
  auto c = exceptional_form(ExceptionalKind::D_check_s, 3, 1, 1, Rational(1));
  CHECK(!c.zero);
  CHECK(c.label == "-R^{1,1}_{0,1}");
  CHECK(exceptional_form(ExceptionalKind::D_hat_s, 3, 1, 1, Rational(1)).zero);
  CHECK(exceptional_form(ExceptionalKind::D_hat, 5, 0, 2).label == "-D^{0,2}_{0,1}");
  CHECK(exceptional_form(ExceptionalKind::D_hat, 5, 0, 3).zero);
  CHECK(exceptional_form(ExceptionalKind::D_hat, 5, 4, 3).label == "-D^{4,3}_{0,1}");
  CHECK(exceptional_form(ExceptionalKind::D_hat, 5, 4, 2).zero);
  CHECK(exceptional_form(ExceptionalKind::R_hat, 5, 0, 3).label == "-R^{1,3}_{0,1}");
  CHECK(exceptional_form(ExceptionalKind::R_hat, 5, 3, 2).label == "-D^{4,1}_{0,1}");
  CHECK(exceptional_form(ExceptionalKind::R_hat, 5, 4, 2).label == "-R^{5,2}_{0,1}");
  CHECK(exceptional_form(ExceptionalKind::R_hat, 5, 4, 1).zero);
  CHECK(exceptional_form(ExceptionalKind::R_hat, 5, 1, 2).zero);
  // second-floor check forms
  CHECK(exceptional_form(ExceptionalKind::D_check_s, 5, 0, 2, half(1)).label == "-D^{0,2}_{0,1}");
  CHECK(exceptional_form(ExceptionalKind::D_check_s, 5, 0, 2, make_rational(1, 4)).zero);
  CHECK(exceptional_form(ExceptionalKind::R_check_s, 5, 3, 2, half(3)).label == "-D^{4,1}_{0,1}");
  CHECK(exceptional_form(ExceptionalKind::R_check_s, 5, 4, 2, half(1)).label == "-R^{5,2}_{0,1}");
  CHECK(error_of([] { exceptional_form(ExceptionalKind::D_hat_s, 3, 1, 1); }) == ErrorKind::invalid_input);
}

TEST_CASE("weighted hat and check forms split the unweighted table") {
  for (int N : {3, 5})
    for (int q = 0; q <= N - 1; ++q)
      for (int K = 1; K <= 4; ++K)
        for (int s2 = -6; s2 <= 10; ++s2) {
          const Rational s = make_rational(s2, 4);
          auto full = exceptional_form(ExceptionalKind::D_hat, N, q, K);
          auto hat = exceptional_form(ExceptionalKind::D_hat_s, N, q, K, s);
          auto check = exceptional_form(ExceptionalKind::D_check_s, N, q, K, s);
          CHECK(hat.zero + check.zero == 1 + full.zero);
          if (!full.zero) CHECK((hat.zero ? check.label : hat.label) == full.label);
          auto rfull = exceptional_form(ExceptionalKind::R_hat, N, q, K);
          auto rhat = exceptional_form(ExceptionalKind::R_hat_s, N, q, K, s);
          auto rcheck = exceptional_form(ExceptionalKind::R_check_s, N, q, K, s);
          CHECK(rhat.zero + rcheck.zero == 1 + rfull.zero);
        }
}

TEST_CASE("exceptional values are the chain-start towers") {
  Form r11 = exceptional_value(exceptional_form(ExceptionalKind::D_hat, 3, 1, 1));
  auto fam = build_tower_pair(3, 0, Sign::minus, 0, 1);
  CHECK(r11 == -fam.R[1][0]);
  CHECK(rot(r11).is_zero());
  CHECK(div(r11).is_zero());
  Form d21 = exceptional_value(exceptional_form(ExceptionalKind::R_hat, 3, 1, 2));
  CHECK(d21.grade() == 2);
  CHECK(rot(d21).is_zero());
  CHECK(div(d21).is_zero());
  CHECK(exceptional_value(exceptional_form(ExceptionalKind::D_hat, 5, 2, 2)).is_zero());
}
