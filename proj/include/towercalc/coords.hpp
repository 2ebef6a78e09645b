#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "towercalc/forms.hpp"
#include "towercalc/linalg.hpp"

namespace towercalc {

/// Basis element r^{h - |alpha|} x^alpha dx^mask of the homogeneous degree-h
/// q-forms, with alpha_1 <= 1.
struct CoordKey {
  IndexMask mask = 0;
  Monomial alpha;

  friend bool operator==(const CoordKey&, const CoordKey&) = default;
};

/// Column order: mask ascending, then alpha from the grlex-largest down.
struct CoordKeyLess {
  bool operator()(const CoordKey& a, const CoordKey& b) const {
    if (a.mask != b.mask) return a.mask < b.mask;
    return GrlexLess{}(b.alpha, a.alpha);
  }
};

using CoordVec = std::vector<std::pair<CoordKey, Rational>>;

/// Reflection parity class: bit j is (alpha_j + [j in mask]) mod 2. rot, div
/// and sphere pairings never mix classes.
inline std::uint32_t block_of(const CoordKey& k) { return k.alpha.parity_mask() ^ k.mask; }

/// Coordinates of a form homogeneous of the given degree (zero form allowed).
CoordVec form_to_coords(const Form& f, int degree);
Form coords_to_form(int N, int q, int degree, const CoordVec& v);

/// Basis keys of rank q, degree h in one parity block with |alpha| <= depth.
/// With polynomial set, only keys with even nonnegative r exponent.
std::vector<CoordKey> ansatz_keys(int N, int q, int h, std::uint32_t block, int depth, bool polynomial);

/// rot and div of one basis element of degree h, as degree h-1 coordinates.
CoordVec rot_of_key(int N, int h, const CoordKey& k);
CoordVec div_of_key(int N, int h, const CoordKey& k);

/// Sphere pairing of two coordinate vectors.
Rational coord_inner(int N, const CoordVec& a, const CoordVec& b);

/// Fischer-dual data of a polynomial degree-h vector s (h >= 0) whose
/// components are harmonic: alpha! times the monomial coefficient of x^alpha
/// in s, over the keys with |alpha| = h. For any polynomial degree-h vector x,
/// coord_inner(x, s) = fischer_scale(N, h) * top_pairing(x, dual).
CoordVec harmonic_dual(int N, int h, const CoordVec& s);
/// 1 / (N (N+2) ... (N+2h-2))
Rational fischer_scale(int N, int h);
/// Sum of products over matching keys.
Rational top_pairing(const CoordVec& x, const CoordVec& dual);

/// Largest |alpha| present, -1 if empty.
int coord_depth(const CoordVec& v);

void sort_coords(CoordVec& v);

}  // namespace towercalc
