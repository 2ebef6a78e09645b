#pragma once

#include <map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "towercalc/polynomial.hpp"

namespace towercalc {

/// r^b * poly with poly homogeneous, nonzero and not divisible by the sum of
/// squares. Total degree is b + deg(poly).
struct HomogeneousPart {
  int degree = 0;
  int r_exp = 0;
  Polynomial poly;

  friend bool operator==(const HomogeneousPart&, const HomogeneousPart&) = default;
};

/// Canonical representative of r^b * poly. Throws invalid-input when poly is
/// not homogeneous. A zero poly yields a part with an empty poly.
HomogeneousPart canonicalize(int b, const Polynomial& poly);

/// Term r^{degree - |alpha|} x^alpha with alpha_1 <= 1. Together these form a
/// linear basis of each homogeneous piece of the ring.
using ReducedTerm = std::pair<Monomial, Rational>;

/// Coordinates of a homogeneous part in the reduced basis, sorted by GrlexLess.
std::vector<ReducedTerm> reduced_terms(const HomogeneousPart& part);

/// Element of Q[x_1..x_N][r, 1/r] / (r^2 - sum x_i^2).
///
/// Parts are keyed by (degree, parity of the r exponent): r^odd and r^even
/// terms of one degree cannot be merged into a single canonical pair.
class RadialRingElement {
 public:
  using Key = std::pair<int, int>;

  RadialRingElement() = default;
  explicit RadialRingElement(int nvars) : n_(nvars) {}

  static RadialRingElement from_part(int nvars, int b, const Polynomial& poly);
  static RadialRingElement constant(int nvars, const Rational& c);
  static RadialRingElement coordinate(int nvars, int i);
  static RadialRingElement radius_power(int nvars, int b);
  static RadialRingElement from_polynomial(const Polynomial& p);
  /// Sum of c * r^{degree - |alpha|} x^alpha over reduced terms.
  static RadialRingElement from_reduced(int nvars, int degree, const std::vector<ReducedTerm>& terms);

  int nvars() const { return n_; }
  bool is_zero() const { return parts_.empty(); }
  const std::map<Key, HomogeneousPart>& parts() const { return parts_; }

  /// Distinct total degrees present, ascending.
  std::vector<int> degrees() const;
  /// The sum of all parts of total degree d.
  RadialRingElement homogeneous_component(int d) const;
  bool is_homogeneous() const { return degrees().size() <= 1; }

  RadialRingElement& operator+=(const RadialRingElement& other);
  RadialRingElement& operator-=(const RadialRingElement& other);
  RadialRingElement& operator*=(const Rational& c);
  RadialRingElement operator-() const;

  friend RadialRingElement operator+(RadialRingElement a, const RadialRingElement& b) { return a += b; }
  friend RadialRingElement operator-(RadialRingElement a, const RadialRingElement& b) { return a -= b; }
  friend RadialRingElement operator*(RadialRingElement a, const Rational& c) { return a *= c; }
  friend RadialRingElement operator*(const Rational& c, RadialRingElement a) { return a *= c; }
  friend RadialRingElement operator*(const RadialRingElement& a, const RadialRingElement& b);

  /// Multiplication by r^b.
  RadialRingElement times_r_power(int b) const;
  RadialRingElement times_coordinate(int i) const;
  /// d/dx_{i+1}, using d r^b / dx_i = b r^{b-2} x_i.
  RadialRingElement partial(int i) const;

  /// Value on the unit sphere: r set to one.
  Polynomial restrict_to_sphere() const;

  friend bool operator==(const RadialRingElement& a, const RadialRingElement& b) {
    return a.parts_ == b.parts_;
  }

  std::string to_string() const;

 private:
  void add_part(const HomogeneousPart& part, const Rational& scale);

  int n_ = 0;
  std::map<Key, HomogeneousPart> parts_;
};

nlohmann::json to_json(const RadialRingElement& e);
RadialRingElement ring_from_json(int nvars, const nlohmann::json& j);

}  // namespace towercalc
