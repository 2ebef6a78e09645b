#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "towercalc/rational.hpp"
#include "towercalc/towers.hpp"

namespace towercalc {

/// D-indices count q-forms with bound mu^{q,k}; R-indices count q-forms with
/// bound mu^{q-1,k+1}.
enum class IndexRole { D, R };

const char* to_string(IndexRole r);

/// Upper bound of the counting index for an index of the given role and rank.
int counting_bound(IndexRole role, int rank, int k, int sigma, int N);

/// Index together with the rank and role of the form it addresses.
struct RankedIndex {
  TowerIndex index;
  IndexRole role = IndexRole::D;
  int rank = 0;

  friend bool operator==(const RankedIndex&, const RankedIndex&) = default;
};

bool in_index_set(const RankedIndex& I, int N);

/// h_I < -s - N/2.
bool in_weighted_L2(const TowerIndex& I, const Rational& s, int N);

/// Indices with k <= K that are not in L^2_s, in (sign, k, sigma, m) order.
/// Minus-sign indices satisfy sigma <= s + k - N/2 and are finite in number;
/// plus-sign indices need sigma_max.
std::vector<TowerIndex> enumerate_excluded(int N, int q, int K, const Rational& s, bool negative_only = true,
                                           IndexRole role = IndexRole::D, std::optional<int> sigma_max = std::nullopt);

/// True iff the minus-sign part of enumerate_excluded is empty, i.e. s < N/2 - K.
bool excluded_set_empty(int N, int K, const Rational& s);

/// (sgn, k + j, sigma, m)
TowerIndex shift(const TowerIndex& I, int j);
/// (-sgn, k, sigma, m)
TowerIndex negate(const TowerIndex& I);
/// Shifting by an odd amount moves a D-index of rank q to an R-index of rank
/// q + 1 and back.
RankedIndex shift(const RankedIndex& I, int j);

/// s in {n + N/2} or {1 - n - N/2}, n >= 0.
bool is_exceptional_weight(const Rational& s, int N);
/// First `count` exceptional weights, n = 0, 1, ... alternating between the
/// two families (n + N/2 before 1 - n - N/2).
std::vector<Rational> exceptional_weights(int N, int count);

enum class Hypothesis { thm41, def57, thm510 };

Hypothesis parse_hypothesis(const std::string& id);  // "thm41", "def57", "thm510"
const char* to_string(Hypothesis h);

struct HypothesisInput {
  int N = 3;
  Rational s;
  Rational tau;
  std::optional<int> j;            // required by thm510
  std::optional<Rational> h_max;   // max homogeneity degree of the data indices; absent for no data
  std::optional<Rational> t;       // range weight checked by thm510
};

struct ConditionResult {
  std::string condition;
  bool ok = true;
  std::string detail;
};

struct HypothesisReport {
  Hypothesis context = Hypothesis::thm41;
  std::vector<ConditionResult> conditions;
  bool ok() const;
};

HypothesisReport validate_hypotheses(Hypothesis context, const HypothesisInput& in);

nlohmann::json to_json(const HypothesisReport& r);

}  // namespace towercalc
