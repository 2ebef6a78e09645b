#pragma once

#include <random>

#include "towercalc/expansion.hpp"
#include "towercalc/forms.hpp"

namespace towercalc::testing {

inline Rational random_rational(std::mt19937& rng, int range = 5) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, 3);
  return make_rational(num(rng), den(rng));
}

inline Monomial random_monomial(std::mt19937& rng, int N, int degree) {
  Monomial m;
  std::uniform_int_distribution<int> pick(0, N - 1);
  for (int k = 0; k < degree; ++k) ++m.exp[pick(rng)];
  return m;
}

inline Polynomial random_homogeneous(std::mt19937& rng, int N, int degree, int terms = 4) {
  PolynomialBuilder b(N);
  for (int t = 0; t < terms; ++t) b.add(random_monomial(rng, N, degree), random_rational(rng));
  return b.build();
}

/// Random element with a few parts of mixed r exponents.
inline RadialRingElement random_element(std::mt19937& rng, int N, int parts = 2) {
  std::uniform_int_distribution<int> bexp(-5, 3);
  std::uniform_int_distribution<int> deg(0, 3);
  RadialRingElement e(N);
  for (int p = 0; p < parts; ++p) e += RadialRingElement::from_part(N, bexp(rng), random_homogeneous(rng, N, deg(rng), 3));
  return e;
}

inline Form random_form(std::mt19937& rng, int N, int q, int comps = 3) {
  auto masks = masks_of_grade(N, q);
  std::uniform_int_distribution<std::size_t> pick(0, masks.size() - 1);
  Form f(N, q);
  for (int c = 0; c < comps; ++c) f.add_component(masks[pick(rng)], random_element(rng, N));
  return f;
}

struct TowerCombination {
  MaxwellPair pair;
  std::map<TowerIndex, Rational> e;
  std::map<TowerIndex, Rational> h;
};

/// Random rational combination of D^q and R^{q+1} tower forms with heights up
/// to max_k and sigma up to sigma_max.
inline TowerCombination random_tower_combination(std::mt19937& rng, TowerStore& store, int q, int max_k,
                                                 int sigma_max, int terms) {
  const int N = store.dimension();
  TowerCombination c{zero_pair(N, q), {}, {}};
  std::uniform_int_distribution<int> kd(0, max_k), sd(0, sigma_max), coin(0, 1);
  for (int t = 0; t < terms; ++t) {
    const Sign sign = coin(rng) ? Sign::plus : Sign::minus;
    const int k = kd(rng), sigma = sd(rng);
    const bool D_side = coin(rng) == 1;
    const int count = D_side ? store.d_count(q, sign, k, sigma) : store.r_count(q + 1, sign, k, sigma);
    if (count == 0) continue;
    std::uniform_int_distribution<int> md(1, count);
    const TowerIndex I{sign, k, sigma, md(rng)};
    Rational v = random_rational(rng);
    if (sgn(v) == 0) v = 1;
    store.family(q, sign, sigma, max_k);
    if (D_side) {
      c.pair.E += store.D(q, I) * v;
      c.e[I] += v;
      if (sgn(c.e[I]) == 0) c.e.erase(I);
    } else {
      c.pair.H += store.R(q + 1, I) * v;
      c.h[I] += v;
      if (sgn(c.h[I]) == 0) c.h.erase(I);
    }
  }
  return c;
}

}  // namespace towercalc::testing
