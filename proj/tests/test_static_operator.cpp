#include <doctest.h>

#include "towercalc/error.hpp"
#include "towercalc/static_operator.hpp"

using namespace towercalc;

namespace {

Rational q_(long p, long d = 1) { return make_rational(p, d); }

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

std::vector<TowerIndex> keys(const std::map<TowerIndex, Coefficient>& m) {
  std::vector<TowerIndex> out;
  for (const auto& [I, c] : m) out.push_back(I);
  return out;
}

int symbolic_count(const std::map<TowerIndex, Coefficient>& m) {
  int n = 0;
  for (const auto& [I, c] : m) n += c.symbolic();
  return n;
}

}  // namespace

TEST_CASE("whole-space solve examples") {
  TowerStore store(3);
  const TowerIndex I{Sign::minus, 0, 1, 2};
  store.family(1, Sign::minus, 1, 2);
  const Form D = store.D(1, I);
  auto p = solve_whole_space(D, Form(3, 2), store);
  CHECK(p.E.is_zero());
  CHECK(p.H == store.R(2, shift(I, 1)));
  CHECK(div(p.H) == D);

  p = solve_whole_space(Form(3, 1), Form(3, 2), store);
  CHECK(p.is_zero());

  const TowerIndex J{Sign::plus, 0, 2, 1};
  store.family(1, Sign::plus, 2, 2);
  const Form R = store.R(2, J);
  p = solve_whole_space(Form(3, 1), R, store);
  CHECK(p.E == store.D(1, shift(J, 1)));
  CHECK(rot(p.E) == R);
  CHECK(p.H.is_zero());

  const Form bad = Form::basis(3, 0b001, RadialRingElement::coordinate(3, 0));
  CHECK(error_of([&] { solve_whole_space(bad, Form(3, 2), store); }) == ErrorKind::not_in_span);
}

TEST_CASE("whole-space solve on mixed data in five dimensions") {
  TowerStore store(5);
  const TowerIndex I{Sign::minus, 1, 0, 3};
  const TowerIndex J{Sign::plus, 0, 1, 4};
  store.family(2, Sign::minus, 0, 2);
  store.family(2, Sign::plus, 1, 2);
  const Form F = store.D(2, I) * q_(3, 2);
  const Form G = store.R(3, J) * q_(-2);
  const auto p = solve_whole_space(F, G, store);
  CHECK(div(p.H) == F);
  CHECK(rot(p.E) == G);
}

TEST_CASE("single application without fresh unknowns") {
  TowerProfile p;
  p.N = 3;
  p.q = 1;
  p.s = q_(1, 4);
  p.l2_weight = p.s;
  p.f[{Sign::plus, 0, 0, 1}] = {1, {}};
  validate_profile(p);
  const auto out = apply_L_profile(p, q_(2));
  CHECK(out.s == q_(-3, 4));
  CHECK(out.l2_weight == q_(-3, 4));
  CHECK(out.f.empty());
  REQUIRE(out.g.size() == 1);
  CHECK(out.g.begin()->first == TowerIndex{Sign::plus, 1, 0, 1});
  CHECK(out.g.begin()->second == Coefficient{1, {}});
}

TEST_CASE("fresh unknowns follow the excluded index sets") {
  for (int N : {3, 5}) {
    for (int q = 1; q <= N - 2; ++q) {
      for (long sn = -3; sn <= 40; ++sn) {
        TowerProfile p;
        p.N = N;
        p.q = q;
        p.s = q_(sn, 4);
        if (p.s <= Rational(1) - half(N) || is_exceptional_weight(p.s, N)) continue;
        p.l2_weight = p.s;
        const Rational tau = std::max(Rational(0), Rational(p.s - half(N))) + 1 + abs(p.s);
        const auto out = apply_L_profile(p, tau);
        const auto eD = enumerate_excluded(N, q, 0, p.s - 1);
        const auto eR = enumerate_excluded(N, q + 1, 0, p.s - 1, true, IndexRole::R);
        CHECK(keys(out.f) == eD);
        CHECK(keys(out.g) == eR);
        CHECK(symbolic_count(out.f) == static_cast<int>(eD.size()));
        for (const auto& I : eD) CHECK(I.sigma <= p.s - 1 - half(N));
      }
    }
  }
}

TEST_CASE("two applications equal the second power") {
  TowerProfile p;
  p.N = 3;
  p.q = 1;
  p.s = q_(15, 4);
  p.l2_weight = p.s;
  p.f[{Sign::minus, 0, 0, 2}] = {q_(2), {}};
  p.g[{Sign::minus, 1, 1, 3}] = {1, "a"};
  const Rational tau = 20;
  const auto once = apply_L_profile(p, tau);
  const auto twice = apply_L_profile(once, tau);
  const auto [pow2, desc] = apply_L_power(p, 2, tau);
  CHECK(pow2 == twice);
  CHECK(desc.f_lands_on_D);
  CHECK(desc.target_weight == p.s - 2);
  CHECK(range_consistent(pow2, desc));
  // data coefficients flow unchanged
  CHECK(pow2.f.at({Sign::minus, 2, 0, 2}) == Coefficient{q_(2), {}});
  CHECK(pow2.g.at({Sign::minus, 3, 1, 3}) == Coefficient{1, "a"});
}

TEST_CASE("odd powers move D data to the R side") {
  TowerProfile p;
  p.N = 5;
  p.q = 2;
  p.s = q_(7, 3);
  p.l2_weight = p.s;
  const TowerIndex I{Sign::plus, 0, 0, 1};
  p.f[I] = {1, {}};
  for (int j : {1, 3}) {
    const auto [out, d] = apply_L_power(p, j, 40);
    CHECK_FALSE(d.f_lands_on_D);
    CHECK(out.g.count(shift(I, j)) == 1);
    CHECK(out.f.count(shift(I, j)) == 0);
    CHECK(range_consistent(out, d));
  }
  const auto [out2, d2] = apply_L_power(p, 2, 40);
  CHECK(out2.f.count(shift(I, 2)) == 1);
}

TEST_CASE("empty data: the range is the excluded set below the power") {
  for (long sn : {9L, 13L, 17L, 21L}) {
    TowerProfile p;
    p.N = 3;
    p.q = 1;
    p.s = q_(sn, 4);
    p.l2_weight = p.s;
    const auto [out, d] = apply_L_power(p, 2, 30);
    CHECK(keys(out.f) == d.new_D);
    CHECK(keys(out.g) == d.new_R);
    CHECK(d.new_D == enumerate_excluded(3, 1, 1, p.s - 2));
    CHECK(d.t_bounds.size() == 2);
    CHECK(range_consistent(out, d));
  }
}

TEST_CASE("range bounds with data") {
  TowerProfile p;
  p.N = 3;
  p.q = 1;
  p.s = q_(10, 3);
  p.l2_weight = p.s;
  p.g[{Sign::minus, 0, 0, 1}] = {1, {}};  // h = -3
  const auto [out, d] = apply_L_power(p, 1, 10);
  // t <= 7/3, t < 3/2, t < -1 - 3/2 + 3 = 1/2
  CHECK(d.t_sup == q_(1, 2));
  CHECK_FALSE(d.t_sup_attained);
  CHECK(range_consistent(out, d));
}

TEST_CASE("profile validation and hypothesis violations") {
  TowerProfile p;
  p.N = 3;
  p.q = 1;
  p.s = q_(1, 4);
  p.l2_weight = p.s;
  p.f[{Sign::minus, 0, 0, 1}] = {1, {}};  // integrable at s = 1/4
  CHECK(error_of([&] { validate_profile(p); }) == ErrorKind::invalid_input);
  p.f.clear();
  p.f[{Sign::plus, 0, 0, 1}] = {1, {}};
  CHECK(error_of([&] { apply_L_profile(p, 1); }) == ErrorKind::hypothesis_violation);
  p.q = 0;
  CHECK(error_of([&] { validate_profile(p); }) == ErrorKind::invalid_input);
  p.q = 1;
  p.s = q_(3, 2);
  CHECK(error_of([&] { validate_profile(p); }) == ErrorKind::invalid_input);
  p.s = q_(1, 4);
  CHECK(error_of([&] { apply_L_power(p, 2, 10); }) == ErrorKind::hypothesis_violation);
  p.f[{Sign::plus, 0, 0, 9}] = {1, {}};
  CHECK(error_of([&] { validate_profile(p); }) == ErrorKind::invalid_input);
}

TEST_CASE("recursion along a single seed") {
  TowerStore store(3);
  const TowerIndex I{Sign::minus, 0, 1, 2};
  const auto rep = verify_recursion(3, 1, {{I, 1}}, {}, 3, store);
  CHECK(rep.ok());
  CHECK(rep.items.size() == 12);
  // three solves: R_{1I}, D_{2I}, R_{3I}
  store.family(1, Sign::minus, 1, 4);
  MaxwellPair p{store.D(1, I), Form(3, 2)};
  for (int step = 1; step <= 3; ++step) p = solve_whole_space(p.E, p.H, store);
  CHECK(p.E.is_zero());
  CHECK(p.H == store.R(2, shift(I, 3)));
}

TEST_CASE("recursion on mixtures") {
  TowerStore store(3);
  for (int sigma = 0; sigma <= 2; ++sigma) {
    const std::map<TowerIndex, Rational> f{{{Sign::minus, 0, sigma, 1}, 2}, {{Sign::plus, 0, sigma, 2}, 3}};
    const std::map<TowerIndex, Rational> g{{{Sign::minus, 0, sigma, 3}, q_(-1, 2)}};
    const auto rep = verify_recursion(3, 1, f, g, 3, store);
    CHECK(rep.ok());
  }
}

TEST_CASE("coefficients and profile JSON") {
  CHECK(parse_coefficient("3/2") == Coefficient{q_(3, 2), {}});
  CHECK(parse_coefficient("E~1(-,0,0,1)") == Coefficient{1, "E~1(-,0,0,1)"});
  CHECK(parse_coefficient("-2*x") == Coefficient{q_(-2), "x"});
  CHECK(to_string(Coefficient{q_(-2), "x"}) == "-2*x");
  TowerProfile p;
  p.N = 5;
  p.q = 2;
  p.s = q_(11, 3);
  p.l2_weight = p.s;
  p.f[{Sign::minus, 0, 0, 1}] = {q_(2, 7), {}};
  const auto [out, d] = apply_L_power(p, 2, 40);
  CHECK(profile_from_json(nlohmann::json::parse(to_json(out).dump())) == out);
  CHECK(error_of([] { profile_from_json(nlohmann::json{{"N", 3}}); }) == ErrorKind::parse_error);
}
