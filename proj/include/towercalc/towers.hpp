#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "towercalc/coords.hpp"
#include "towercalc/forms.hpp"
#include "towercalc/parallel.hpp"

namespace towercalc {

enum class Sign { plus, minus };

const char* to_string(Sign s);  // "+" or "-"
Sign parse_sign(const std::string& s);  // accepts plus/minus/+/-

/// Index (sign, height k, eigenvalue sigma, counting m), m starting at one.
struct TowerIndex {
  Sign sign = Sign::plus;
  int k = 0;
  int sigma = 0;
  int m = 1;

  friend bool operator==(const TowerIndex&, const TowerIndex&) = default;
  friend auto operator<=>(const TowerIndex&, const TowerIndex&) = default;
};

std::string to_string(const TowerIndex& I);
nlohmann::json to_json(const TowerIndex& I);
TowerIndex index_from_json(const nlohmann::json& j);

/// Degree of floor k: k + sigma for plus, k - sigma - N for minus.
int floor_degree(Sign sign, int k, int sigma, int N);
inline int homogeneity_degree(const TowerIndex& I, int N) { return floor_degree(I.sign, I.k, I.sigma, N); }

/// Tower coefficient by its defining recursion.
Rational alpha(Sign sign, int q, int sigma, int k, int N);
/// Same coefficient from the Gamma-ratio closed form, evaluated with exact
/// half-integer Gamma values (the common sqrt(pi) factors cancel).
Rational alpha_closed_form(Sign sign, int q, int sigma, int k, int N);

/// D floors hold q-forms, R floors (q+1)-forms. Floor k has degree
/// floor_degree(sign, k, sigma, N). D[k][m-1] is the form with index
/// (sign, k, sigma, m); likewise R.
struct TowerFamily {
  int N = 0;
  int q = 0;
  Sign sign = Sign::plus;
  int sigma = 0;
  int K = 0;
  Rational omega_sq;
  std::vector<std::vector<Form>> D;
  std::vector<std::vector<Form>> R;
  std::vector<std::vector<CoordVec>> Dc;
  std::vector<std::vector<CoordVec>> Rc;

  int degree(int k) const { return floor_degree(sign, k, sigma, N); }
  bool empty() const;
};

/// Closed-form mu_sigma^q, zero outside 0 <= q <= N.
int mu_or_zero(int N, int q, int sigma);

/// Expected number of forms on each floor, including the extreme-rank cases
/// where the chain start vanishes and the low floors are seeded instead.
int expected_D_count(int N, int q, Sign sign, int sigma, int k);
int expected_R_count(int N, int q, Sign sign, int sigma, int k);

TowerFamily build_tower_pair(int N, int q, Sign sign, int sigma, int K, ExecPolicy policy = ExecPolicy::serial);

/// Rebuilds coordinates after loading forms.
void attach_coordinates(TowerFamily& fam);

nlohmann::json to_json(const TowerFamily& fam);
TowerFamily family_from_json(const nlohmann::json& j);

struct CheckItem {
  std::string relation;
  std::string location;
  bool ok = true;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool ok() const;
  std::vector<CheckItem> failures() const;
  void add(std::string relation, std::string location, bool ok, std::string detail = {});
  void merge(const CheckReport& other);
};

nlohmann::json to_json(const CheckReport& r);

/// Location label "(q=1,-,sigma=0,k=2,m=1)".
std::string location(const TowerFamily& fam, int k, int m);

/// Re-checks every stored form with the canonical ring arithmetic: closedness
/// of the ground floor, the div/rot-free conditions, the lifting relations,
/// homogeneity, sphere-orthogonality to same-degree seeds, agreement of the
/// ground floor with the seed basis, floor multiplicities and per-floor
/// linear independence.
CheckReport verify_relations(const TowerFamily& fam);

/// Laplacian of floors 0 and 1 must vanish; higher floors are listed
/// (nonzero expected, zero reported for review).
CheckReport verify_low_floor_harmonicity(const TowerFamily& fam);

/// Odd floors: T D = 0, R R = 0, div(r^{2j} D) = 0, rot(r^{2j} R) = 0 for
/// j = 1, 2. Even floors with T D = 0 are listed for review.
CheckReport verify_odd_floor_structure(const TowerFamily& fam);

enum class ExceptionalKind { D_hat, R_hat, D_hat_s, R_hat_s, D_check_s, R_check_s };

const char* to_string(ExceptionalKind k);

/// Reference to the family member that realizes an exceptional form. All
/// exceptional forms are minus-sign forms with sigma = 0, m = 1.
struct ExceptionalFormDescriptor {
  ExceptionalKind kind = ExceptionalKind::D_hat;
  int N = 0;
  int q = 0;
  int K = 0;
  std::optional<Rational> s;
  bool zero = true;
  int family_q = 0;   // rank of the D side of the owning family
  bool is_D = true;   // D floor (rank family_q) or R floor (rank family_q + 1)
  int rank = 0;       // rank of the form itself
  int height = 0;
  std::string label;  // e.g. "-R^{1,1}_{0,1}"
};

ExceptionalFormDescriptor exceptional_form(ExceptionalKind kind, int N, int q, int K,
                                           std::optional<Rational> s = std::nullopt);

/// The concrete form (zero form if the descriptor is zero).
Form exceptional_value(const ExceptionalFormDescriptor& d);

}  // namespace towercalc
