#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "towercalc/expansion.hpp"

namespace towercalc {

/// Tower forms of height <= max_k reproducing f exactly; throws not-in-span
/// otherwise. D: D_I^q with q = grade of f. R: R_J^q.
std::map<TowerIndex, Rational> decompose_D(const Form& f, int max_k, TowerStore& store);
std::map<TowerIndex, Rational> decompose_R(const Form& f, int max_k, TowerStore& store);

/// E = sum g_J D_{1J}, H = sum f_I R_{1I} for F = sum f_I D_I, G = sum g_J R_J.
/// Checks rot E = G, div H = F, div E = 0 and rot H = 0 exactly and throws
/// consistency-failure if any fails.
MaxwellPair solve_whole_space(const Form& F, const Form& G, TowerStore& store, int max_k = 6);

/// Rational value, or scale times a named unknown.
struct Coefficient {
  Rational scale = 1;
  std::string symbol;  // empty for a plain rational

  bool symbolic() const { return !symbol.empty(); }
  friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

std::string to_string(const Coefficient& c);
/// "3/2" or a name such as "E~1(-,0,0,1)", optionally "2*name".
Coefficient parse_coefficient(const std::string& text);

/// Non-integrable tower part of a pair of data (F, G) at weight s. f holds the
/// D^q coefficients, g the R^{q+1} coefficients. The remaining part lies in
/// L^2 with weight l2_weight and is not resolved.
struct TowerProfile {
  int N = 3;
  int q = 1;
  Rational s;
  std::map<TowerIndex, Coefficient> f;
  std::map<TowerIndex, Coefficient> g;
  Rational l2_weight;
  int step = 0;

  /// Largest homogeneity degree over f and g, absent if both are empty.
  std::optional<Rational> h_max() const;
  friend bool operator==(const TowerProfile&, const TowerProfile&) = default;
};

/// Throws invalid-input unless 1 <= q <= N - 2, s is not exceptional and
/// every stored index is a valid index that fails L^2_s.
void validate_profile(const TowerProfile& p);

/// One application of L. Validates the hypotheses of the generalized static
/// Maxwell problem for the given tau first (hypothesis-violation on failure).
TowerProfile apply_L_profile(const TowerProfile& p, const Rational& tau);

struct OperatorRangeDescriptor {
  int j = 0;
  Rational target_weight;                 // s - j
  std::vector<TowerIndex> new_D;          // minus-sign D^q indices, heights <= j - 1
  std::vector<TowerIndex> new_R;          // minus-sign R^{q+1} indices, heights <= j - 1
  std::vector<TowerIndex> shifted_f;      // j-shifted D data
  std::vector<TowerIndex> shifted_g;      // j-shifted R data
  bool f_lands_on_D = true;               // j even: D data stays on the D side
  Rational t_sup;                         // admissible t: t <= or < t_sup
  bool t_sup_attained = false;
  std::vector<std::string> t_bounds;      // the bounds, e.g. "t <= 5/2"
};

/// j applications of L, after validating the hypotheses for the power.
std::pair<TowerProfile, OperatorRangeDescriptor> apply_L_power(const TowerProfile& p, int j, const Rational& tau);

/// True iff every index of the profile fails L^2 at its own weight and lies
/// in L^2_t for every admissible t of the descriptor.
bool range_consistent(const TowerProfile& p, const OperatorRangeDescriptor& d);

/// Concrete whole-space iteration from data (F, G) given by coefficient maps.
/// Each step solves, expands the result and checks the defining equations,
/// the shift recursion of the coefficients and the agreement of the
/// expansion with the shift-only profile.
CheckReport verify_recursion(int N, int q, const std::map<TowerIndex, Rational>& f,
                             const std::map<TowerIndex, Rational>& g, int j, TowerStore& store);

nlohmann::json to_json(const TowerProfile& p);
TowerProfile profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OperatorRangeDescriptor& d);

}  // namespace towercalc
