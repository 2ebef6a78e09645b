#include "towercalc/index_algebra.hpp"

#include <algorithm>

#include "towercalc/error.hpp"
#include "towercalc/harmonic_spaces.hpp"

namespace towercalc {

const char* to_string(IndexRole r) { return r == IndexRole::D ? "D" : "R"; }

int counting_bound(IndexRole role, int rank, int k, int sigma, int N) {
  if (role == IndexRole::D) return k % 2 == 0 ? mu_or_zero(N, rank, sigma) : mu_or_zero(N, rank + 1, sigma);
  return (k + 1) % 2 == 0 ? mu_or_zero(N, rank - 1, sigma) : mu_or_zero(N, rank, sigma);
}

bool in_index_set(const RankedIndex& I, int N) {
  const auto& x = I.index;
  if (x.k < 0 || x.sigma < 0 || x.m < 1) return false;
  return x.m <= counting_bound(I.role, I.rank, x.k, x.sigma, N);
}

bool in_weighted_L2(const TowerIndex& I, const Rational& s, int N) {
  return Rational(homogeneity_degree(I, N)) < -s - half(N);
}

std::vector<TowerIndex> enumerate_excluded(int N, int q, int K, const Rational& s, bool negative_only, IndexRole role,
                                           std::optional<int> sigma_max) {
  require_odd_dimension(N);
  if (K < 0) throw TowerError(ErrorKind::invalid_input, "K must be nonnegative");
  if (q < 0 || q > N) throw TowerError(ErrorKind::invalid_input, "rank q out of range");
  if (!negative_only && !sigma_max)
    throw TowerError(ErrorKind::invalid_input, "plus-sign enumeration needs sigma_max");
  std::vector<TowerIndex> out;
  for (Sign sign : {Sign::minus, Sign::plus}) {
    if (sign == Sign::plus && negative_only) continue;
    for (int k = 0; k <= K; ++k) {
      int top;
      if (sign == Sign::minus) {
        const Rational bound = s + k - half(N);
        if (bound < 0) continue;
        top = static_cast<int>(floor_to_long(bound));
        if (sigma_max) top = std::min(top, *sigma_max);
      } else {
        top = *sigma_max;
      }
      for (int sigma = 0; sigma <= top; ++sigma) {
        const TowerIndex probe{sign, k, sigma, 1};
        if (in_weighted_L2(probe, s, N)) continue;
        const int bound = counting_bound(role, q, k, sigma, N);
        for (int m = 1; m <= bound; ++m) out.push_back({sign, k, sigma, m});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool excluded_set_empty(int N, int K, const Rational& s) { return s < half(N) - K; }

TowerIndex shift(const TowerIndex& I, int j) {
  if (I.k + j < 0) throw TowerError(ErrorKind::invalid_input, "shift gives a negative height");
  TowerIndex out = I;
  out.k += j;
  return out;
}

TowerIndex negate(const TowerIndex& I) {
  TowerIndex out = I;
  out.sign = I.sign == Sign::plus ? Sign::minus : Sign::plus;
  return out;
}

RankedIndex shift(const RankedIndex& I, int j) {
  RankedIndex out = I;
  out.index = shift(I.index, j);
  if (j % 2 != 0) {
    out.role = I.role == IndexRole::D ? IndexRole::R : IndexRole::D;
    out.rank = I.role == IndexRole::D ? I.rank + 1 : I.rank - 1;
  }
  return out;
}

namespace {

bool natural(const Rational& x) { return is_integer(x) && sgn(x) >= 0; }

}  // namespace

bool is_exceptional_weight(const Rational& s, int N) {
  return natural(s - half(N)) || natural(Rational(1) - half(N) - s);
}

std::vector<Rational> exceptional_weights(int N, int count) {
  std::vector<Rational> out;
  for (int n = 0; static_cast<int>(out.size()) < count; ++n) {
    out.push_back(Rational(n) + half(N));
    if (static_cast<int>(out.size()) < count) out.push_back(Rational(1 - n) - half(N));
  }
  return out;
}

Hypothesis parse_hypothesis(const std::string& id) {
  if (id == "thm41") return Hypothesis::thm41;
  if (id == "def57") return Hypothesis::def57;
  if (id == "thm510") return Hypothesis::thm510;
  throw TowerError(ErrorKind::invalid_input, "unknown theorem id '" + id + "' (use thm41, def57, thm510)");
}

const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::thm41: return "thm41";
    case Hypothesis::def57: return "def57";
    case Hypothesis::thm510: return "thm510";
  }
  return "?";
}

bool HypothesisReport::ok() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.ok; });
}

HypothesisReport validate_hypotheses(Hypothesis context, const HypothesisInput& in) {
  require_odd_dimension(in.N);
  HypothesisReport rep;
  rep.context = context;
  const Rational n2 = half(in.N);
  auto add = [&](std::string cond, bool ok, const Rational& lhs, const char* op, const Rational& rhs) {
    rep.conditions.push_back(
        {std::move(cond), ok, to_string(lhs) + (ok ? " " : " not ") + op + " " + to_string(rhs)});
  };
  int j = 1;
  if (context == Hypothesis::thm510) {
    if (!in.j) throw TowerError(ErrorKind::invalid_input, "thm510 needs j");
    j = *in.j;
    if (j < 1) throw TowerError(ErrorKind::invalid_input, "thm510 needs j >= 1");
  }

  const Rational lower = Rational(j) - n2;
  add("s > " + std::string(context == Hypothesis::thm510 ? "j" : "1") + " - N/2", in.s > lower, in.s, ">", lower);
  rep.conditions.push_back({"s not an exceptional weight", !is_exceptional_weight(in.s, in.N),
                            to_string(in.s) + (is_exceptional_weight(in.s, in.N) ? " is" : " is not") +
                                " in the exceptional set"});
  const Rational m = std::max(Rational(0), Rational(in.s - n2));
  add("tau > max{0, s - N/2}", in.tau > m, in.tau, ">", m);
  if (context == Hypothesis::thm510) {
    const Rational b = Rational(j - 1) - in.s;
    add("tau >= j - 1 - s", in.tau >= b, in.tau, ">=", b);
  } else {
    add("tau >= -s", in.tau >= -in.s, in.tau, ">=", -in.s);
  }
  if (context != Hypothesis::thm41) {
    if (in.h_max) {
      const Rational b = in.s + n2 + *in.h_max;
      add("tau > s + N/2 + h_max", in.tau > b, in.tau, ">", b);
    } else {
      rep.conditions.push_back({"tau > s + N/2 + h_max", true, "vacuous: no data indices"});
    }
  }
  if (context == Hypothesis::thm510 && in.t) {
    const Rational t = *in.t;
    add("t <= s - j", t <= in.s - j, t, "<=", in.s - j);
    add("t < N/2 - j + 1", t < n2 - j + 1, t, "<", n2 - j + 1);
    if (in.h_max) {
      const Rational b = Rational(-j) - n2 - *in.h_max;
      add("t < -j - N/2 - h_max", t < b, t, "<", b);
    } else {
      rep.conditions.push_back({"t < -j - N/2 - h_max", true, "vacuous: no data indices"});
    }
  }
  return rep;
}

nlohmann::json to_json(const HypothesisReport& r) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : r.conditions) conds.push_back({{"condition", c.condition}, {"ok", c.ok}, {"detail", c.detail}});
  return {{"context", to_string(r.context)}, {"ok", r.ok()}, {"conditions", conds}};
}

}  // namespace towercalc
