#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "towercalc/index_algebra.hpp"
#include "towercalc/tower_store.hpp"

namespace towercalc {

/// (E, H) with E of grade q and H of grade q + 1.
struct MaxwellPair {
  Form E;
  Form H;

  int rank() const { return E.grade(); }
  bool is_zero() const { return E.is_zero() && H.is_zero(); }
  friend bool operator==(const MaxwellPair&, const MaxwellPair&) = default;
};

/// Zero pair of ranks (q, q + 1).
MaxwellPair zero_pair(int N, int q);

/// (E, H) -> (div H, rot E)
MaxwellPair apply_M(const MaxwellPair& p);

/// M^K (E, H) = 0, div E = 0 and rot H = 0.
bool iterated_maxwell_check(const MaxwellPair& p, int K);

/// One exact Gram solve: forms of one homogeneity degree on one side.
struct GramSolve {
  std::string side;  // "E" or "H"
  int degree = 0;
  int size = 0;
  bool nonsingular = true;
};

struct ExpansionResult {
  int N = 0;
  int q = 0;
  int K = 0;
  std::map<TowerIndex, Rational> e_coeffs;  // D_I^q
  std::map<TowerIndex, Rational> h_coeffs;  // R_J^{q+1}
  ExceptionalFormDescriptor D_hat;
  ExceptionalFormDescriptor R_hat;
  std::optional<Rational> e_hat;  // absent when D_hat vanishes
  std::optional<Rational> h_hat;  // absent when R_hat vanishes
  MaxwellPair residual;
  std::vector<GramSolve> solves;

  bool in_span() const { return residual.is_zero(); }
};

/// Decomposes a solution of the iterated system into tower forms of height at
/// most K - 1 plus the exceptional terms. Each homogeneous piece is projected
/// with an exact Gram solve; anything left over is returned as the residual.
/// Throws invalid-input if the pair fails iterated_maxwell_check.
ExpansionResult expand(const MaxwellPair& p, int K, TowerStore& store);

struct SpanProjection {
  std::map<TowerIndex, Rational> coeffs;
  Form residual;
};

/// Exact projection of f onto D^q (D_side) or R^q tower forms of height at
/// most max_k, q the grade of f, one Gram solve per homogeneity degree.
SpanProjection project_onto_towers(const Form& f, bool D_side, int max_k, TowerStore& store);

/// Sum of coefficient times form over all terms.
MaxwellPair reconstruct(const ExpansionResult& res, TowerStore& store);

struct OffendingTerm {
  std::string side;  // "E", "H", "E-hat", "H-hat"
  TowerIndex index;
  Rational coefficient;
  int degree = 0;
  bool by_sign_rule = false;  // the sign-resolved criterion flags it too
};

struct MembershipReport {
  Rational s;
  int m = 0;
  Rational threshold;  // -s - N/2
  std::vector<OffendingTerm> offending;
  bool sign_rule_agrees = true;

  bool in_space() const { return offending.empty(); }
};

/// Terms with nonzero coefficient and degree >= -s - N/2. Exceptional terms
/// are checked by the degree of their form.
MembershipReport membership_filter(const ExpansionResult& res, const Rational& s, int m = 0);

struct Lemma34Flags {
  bool rot_ok = false;  // rot E in L^2_{s+1}
  bool div_ok = false;  // div E in L^2_{s+1}
};

enum class Lemma34Class { in_L2, rot_branch, div_branch, floor0_branch, unresolved };
const char* to_string(Lemma34Class c);

struct Lemma34Report {
  Rational s;
  Lemma34Flags flags;                  // computed from E
  std::optional<Lemma34Flags> asserted;
  bool flags_agree = true;
  Lemma34Class cls = Lemma34Class::in_L2;
  std::vector<int> nonintegrable_degrees;
  std::map<TowerIndex, Rational> coeffs;  // D_I^q or R_I^q depending on the branch
  ExceptionalFormDescriptor exceptional;
  std::optional<Rational> exceptional_coeff;
  Form residual;
};

/// Splits off the L^2_s part of a harmonic q-form and represents the rest by
/// the branch the integrability of rot E and div E selects. With both flags
/// the ground-floor branch is used. Throws invalid-input unless E is harmonic
/// and s >= -N/2.
Lemma34Report lemma34_classify(const Form& E, const Rational& s, TowerStore& store,
                               std::optional<Lemma34Flags> asserted = std::nullopt);

/// Every homogeneous piece of f has degree < -s - N/2.
bool form_in_weighted_L2(const Form& f, const Rational& s);

nlohmann::json to_json(const MaxwellPair& p);
MaxwellPair pair_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExpansionResult& r);
nlohmann::json to_json(const MembershipReport& r);
nlohmann::json to_json(const Lemma34Report& r);

}  // namespace towercalc
