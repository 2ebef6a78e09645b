#include "towercalc/coords.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_map>

#include "towercalc/error.hpp"

namespace towercalc {

void sort_coords(CoordVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return CoordKeyLess{}(a.first, b.first); });
  CoordVec out;
  out.reserve(v.size());
  for (auto& t : v) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
      if (sgn(out.back().second) == 0) out.pop_back();
    } else if (sgn(t.second) != 0) {
      out.push_back(std::move(t));
    }
  }
  v.swap(out);
}

CoordVec form_to_coords(const Form& f, int degree) {
  CoordVec out;
  for (const auto& [mask, e] : f.components()) {
    for (const auto& [key, part] : e.parts()) {
      if (key.first != degree)
        throw TowerError(ErrorKind::invalid_input, "form is not homogeneous of degree " + std::to_string(degree));
      for (auto& [a, c] : reduced_terms(part)) out.emplace_back(CoordKey{mask, a}, c);
    }
  }
  sort_coords(out);
  return out;
}

Form coords_to_form(int N, int q, int degree, const CoordVec& v) {
  Form f(N, q);
  std::map<IndexMask, std::vector<ReducedTerm>> by_mask;
  for (const auto& [k, c] : v) by_mask[k.mask].emplace_back(k.alpha, c);
  for (const auto& [mask, terms] : by_mask) f.add_component(mask, RadialRingElement::from_reduced(N, degree, terms));
  return f;
}

std::vector<CoordKey> ansatz_keys(int N, int q, int h, std::uint32_t block, int depth, bool polynomial) {
  std::vector<CoordKey> out;
  for (IndexMask mask : masks_of_grade(N, q)) {
    const std::uint32_t psi = block ^ mask;
    const int base = std::popcount(psi);
    if (base > depth) continue;
    // alpha_1 equals its parity bit; the other exponents add even steps.
    const int steps = (depth - base) / 2;
    Monomial a;
    for (int j = 0; j < N; ++j) a.exp[j] = (psi >> j) & 1u;
    std::vector<int> t(N, 0);
    auto emit = [&](auto&& self, int j, int left) -> void {
      if (j == N) {
        Monomial m = a;
        for (int i = 1; i < N; ++i) m.exp[i] = static_cast<std::uint8_t>(m.exp[i] + 2 * t[i]);
        const int b = h - m.degree();
        if (polynomial && (b < 0 || (b % 2) != 0)) return;
        out.push_back({mask, m});
        return;
      }
      for (int s = 0; s <= left; ++s) {
        t[j] = s;
        self(self, j + 1, left - s);
      }
      t[j] = 0;
    };
    emit(emit, 1, steps);
  }
  std::sort(out.begin(), out.end(), CoordKeyLess{});
  return out;
}

namespace {

// Appends c * r^{d-|beta|} x^beta dx^mask, rewriting x_1^2 = r^2 - sum_{j>1} x_j^2.
void push_reduced(int N, IndexMask mask, Monomial beta, const Rational& c, CoordVec& out) {
  if (beta.exp[0] < 2) {
    out.emplace_back(CoordKey{mask, beta}, c);
    return;
  }
  beta.exp[0] = static_cast<std::uint8_t>(beta.exp[0] - 2);
  out.emplace_back(CoordKey{mask, beta}, c);
  for (int j = 1; j < N; ++j) {
    Monomial m = beta;
    m.exp[j] = static_cast<std::uint8_t>(m.exp[j] + 2);
    out.emplace_back(CoordKey{mask, m}, -c);
  }
}

// d/dx_i of r^{h-|alpha|} x^alpha, scaled by sign, placed at mask.
void push_partial(int N, int h, const Monomial& alpha, int i, int sign, IndexMask mask, CoordVec& out) {
  const int b = h - alpha.degree();
  if (b != 0) {
    Monomial up = alpha;
    ++up.exp[i];
    push_reduced(N, mask, up, Rational(sign * b), out);
  }
  if (alpha.exp[i] > 0) {
    Monomial down = alpha;
    --down.exp[i];
    out.emplace_back(CoordKey{mask, down}, Rational(sign * alpha.exp[i]));
  }
}

int insert_sign(IndexMask I, int i) { return (std::popcount(I & ((1u << i) - 1)) & 1) ? -1 : 1; }

}  // namespace

CoordVec rot_of_key(int N, int h, const CoordKey& k) {
  CoordVec out;
  for (int i = 0; i < N; ++i) {
    if (k.mask & (1u << i)) continue;
    push_partial(N, h, k.alpha, i, insert_sign(k.mask, i), k.mask | (1u << i), out);
  }
  sort_coords(out);
  return out;
}

CoordVec div_of_key(int N, int h, const CoordKey& k) {
  CoordVec out;
  for (int i = 0; i < N; ++i) {
    if (!(k.mask & (1u << i))) continue;
    const IndexMask J = k.mask & ~(1u << i);
    push_partial(N, h, k.alpha, i, insert_sign(J, i), J, out);
  }
  sort_coords(out);
  return out;
}

Rational coord_inner(int N, const CoordVec& a, const CoordVec& b) {
  // Both vectors are sorted mask-major, so only equal-mask runs interact.
  Rational s = 0;
  Rational inner;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const IndexMask ma = a[i].first.mask, mb = b[j].first.mask;
    if (ma < mb) {
      ++i;
      continue;
    }
    if (mb < ma) {
      ++j;
      continue;
    }
    std::size_t ie = i, je = j;
    while (ie < a.size() && a[ie].first.mask == ma) ++ie;
    while (je < b.size() && b[je].first.mask == ma) ++je;
    std::unordered_map<std::uint32_t, std::vector<std::size_t>> by_parity;
    for (std::size_t y = j; y < je; ++y) by_parity[b[y].first.alpha.parity_mask()].push_back(y);
    for (std::size_t x = i; x < ie; ++x) {
      auto it = by_parity.find(a[x].first.alpha.parity_mask());
      if (it == by_parity.end()) continue;
      inner = 0;
      for (std::size_t y : it->second) inner += b[y].second * sphere_moment(N, a[x].first.alpha * b[y].first.alpha);
      s += a[x].second * inner;
    }
    i = ie;
    j = je;
  }
  return s;
}

namespace {

long factorial_small(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

CoordVec harmonic_dual(int N, int h, const CoordVec& s) {
  CoordVec out;
  for (const auto& [k, c] : s) {
    const int b = h - k.alpha.degree();
    if (b < 0 || b % 2 != 0) throw TowerError(ErrorKind::invalid_input, "harmonic_dual needs a polynomial vector");
    const int j = b / 2;
    // (x_1^2 + ... + x_N^2)^j x^gamma; terms with x_1^2 factors leave the
    // alpha_1 <= 1 keys and are not needed.
    std::vector<int> delta(N, 0);
    auto emit = [&](auto&& self, int pos, int left, long denom) -> void {
      if (pos == N - 1) {
        delta[pos] = left;
        Monomial beta = k.alpha;
        for (int t = 1; t < N; ++t) beta.exp[t] = static_cast<std::uint8_t>(beta.exp[t] + 2 * delta[t]);
        out.emplace_back(CoordKey{k.mask, beta}, c * make_rational(factorial_small(j), denom * factorial_small(left)));
        return;
      }
      for (int d = 0; d <= left; ++d) {
        delta[pos] = d;
        self(self, pos + 1, left - d, denom * factorial_small(d));
      }
    };
    if (N == 1) {
      if (j == 0) out.emplace_back(k, c);
    } else {
      emit(emit, 1, j, 1);
    }
  }
  sort_coords(out);
  for (auto& [k, c] : out) {
    long f = 1;
    for (int t = 0; t < N; ++t) f *= factorial_small(k.alpha.exp[t]);
    c *= f;
  }
  return out;
}

Rational fischer_scale(int N, int h) {
  BigInt den = 1;
  for (int j = 0; j < h; ++j) den *= N + 2 * j;
  return make_rational(1, den);
}

Rational top_pairing(const CoordVec& x, const CoordVec& dual) {
  Rational s = 0;
  std::size_t i = 0, j = 0;
  const CoordKeyLess less;
  while (i < x.size() && j < dual.size()) {
    if (less(x[i].first, dual[j].first)) ++i;
    else if (less(dual[j].first, x[i].first)) ++j;
    else s += x[i++].second * dual[j++].second;
  }
  return s;
}

int coord_depth(const CoordVec& v) {
  int d = -1;
  for (const auto& [k, c] : v) d = std::max(d, k.alpha.degree());
  return d;
}

}  // namespace towercalc
