#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "towercalc/ring.hpp"

namespace towercalc {

/// Increasing index tuple {i_1 < ... < i_q} stored as a bit mask, bit i for
/// index i+1.
using IndexMask = std::uint32_t;

int popcount(IndexMask m);
std::vector<int> mask_to_indices(IndexMask m);  // 1-based
IndexMask indices_to_mask(const std::vector<int>& one_based);
std::string mask_to_string(IndexMask m);  // "1,3", empty for the 0-tuple
IndexMask mask_from_string(const std::string& s, int N);
/// All masks with q bits among N, in lexicographic tuple order.
std::vector<IndexMask> masks_of_grade(int N, int q);

/// Throws unsupported-dimension unless N is odd and 3 <= N <= kMaxDim.
void require_odd_dimension(int N);

/// q-form on R^N with radial-ring coefficients.
class Form {
 public:
  Form() = default;
  Form(int N, int q);

  static Form basis(int N, IndexMask mask, const RadialRingElement& coef);
  static Form scalar(int N, const RadialRingElement& f) { return basis(N, 0, f); }

  int dimension() const { return n_; }
  int grade() const { return q_; }
  bool is_zero() const { return comps_.empty(); }
  const std::map<IndexMask, RadialRingElement>& components() const { return comps_; }
  RadialRingElement component(IndexMask mask) const;

  /// Adds coef to the component at mask.
  void add_component(IndexMask mask, const RadialRingElement& coef);

  Form& operator+=(const Form& other);
  Form& operator-=(const Form& other);
  Form& operator*=(const Rational& c);
  Form operator-() const;
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const Rational& c) { return a *= c; }
  friend Form operator*(const Rational& c, Form a) { return a *= c; }

  /// Componentwise product with a ring element.
  Form times(const RadialRingElement& f) const;
  Form times_r_power(int b) const;

  /// Total degrees present over all components, ascending.
  std::vector<int> degrees() const;

  friend bool operator==(const Form& a, const Form& b) {
    return a.n_ == b.n_ && a.q_ == b.q_ && a.comps_ == b.comps_;
  }

  std::string to_string() const;

 private:
  int n_ = 0;
  int q_ = 0;
  std::map<IndexMask, RadialRingElement> comps_;
};

Form wedge(const Form& f, const Form& g);
/// *(dx^I) = sgn(I, I^c) dx^{I^c} for the orientation dx^1 ^ ... ^ dx^N.
Form hodge_star(const Form& f);
/// Exterior derivative.
Form rot(const Form& f);
/// Codifferential (-1)^{(q-1)N} * rot *.
Form div(const Form& f);
/// Componentwise sum of second derivatives, checked against rot div + div rot.
Form laplacian(const Form& f);
/// Componentwise sum of second derivatives only.
Form componentwise_laplacian(const Form& f);
/// (sum x_i dx^i) ^ F
Form R_op(const Form& f);
/// Contraction with the Euler field sum x_i d/dx_i.
Form T_op(const Form& f);

using HomogeneityDecomposition = std::map<int, Form>;
HomogeneityDecomposition homogeneity_split(const Form& f);

/// Normalized L2 pairing over the unit sphere.
Rational sphere_inner_product(const Form& f, const Form& g);

/// Sphere restriction of a form, kept for repeated pairings. The signature
/// lists (mask, monomial parity) pairs present; disjoint signatures pair to zero.
struct SphereRestriction {
  int N = 0;
  int q = 0;
  std::vector<std::pair<IndexMask, Polynomial>> comps;
  std::vector<std::pair<IndexMask, std::uint32_t>> signature;
};

SphereRestriction restrict_to_sphere(const Form& f);
Rational sphere_inner_product(const SphereRestriction& f, const SphereRestriction& g);

nlohmann::json to_json(const Form& f);
Form form_from_json(const nlohmann::json& j);

}  // namespace towercalc
