#include "towercalc/static_operator.hpp"

#include <algorithm>

#include "towercalc/error.hpp"

namespace towercalc {

namespace {

// Tries heights 0, 1, ... up to max_k and stops at the first exact fit, so
// families are only built as high as the data needs.
std::map<TowerIndex, Rational> decompose(const Form& f, bool D_side, int max_k, TowerStore& store) {
  for (int k = 0; k <= max_k; ++k) {
    auto p = project_onto_towers(f, D_side, k, store);
    if (p.residual.is_zero()) return std::move(p.coeffs);
  }
  throw TowerError(ErrorKind::not_in_span, std::string("form is not in the ") + (D_side ? "D" : "R") +
                                               "-tower span up to height " + std::to_string(max_k));
}

}  // namespace

std::map<TowerIndex, Rational> decompose_D(const Form& f, int max_k, TowerStore& store) {
  return decompose(f, true, max_k, store);
}

std::map<TowerIndex, Rational> decompose_R(const Form& f, int max_k, TowerStore& store) {
  return decompose(f, false, max_k, store);
}

MaxwellPair solve_whole_space(const Form& F, const Form& G, TowerStore& store, int max_k) {
  const int N = F.dimension();
  const int q = F.grade();
  if (G.dimension() != N) throw TowerError(ErrorKind::dimension_mismatch, "F and G live in different dimensions");
  if (G.grade() != q + 1) throw TowerError(ErrorKind::invalid_input, "G must have grade q + 1");
  const auto f = decompose_D(F, max_k, store);
  const auto g = decompose_R(G, max_k, store);
  MaxwellPair out = zero_pair(N, q);
  for (const auto& [J, c] : g) {
    const TowerIndex J1 = shift(J, 1);
    store.family(q, J1.sign, J1.sigma, J1.k);
    out.E += store.D(q, J1) * c;
  }
  for (const auto& [I, c] : f) {
    const TowerIndex I1 = shift(I, 1);
    store.family(q, I1.sign, I1.sigma, I1.k);
    out.H += store.R(q + 1, I1) * c;
  }
  if (!(rot(out.E) == G)) throw TowerError(ErrorKind::consistency_failure, "rot E differs from G");
  if (!(div(out.H) == F)) throw TowerError(ErrorKind::consistency_failure, "div H differs from F");
  if (q > 0 && !div(out.E).is_zero()) throw TowerError(ErrorKind::consistency_failure, "div E is nonzero");
  if (q + 1 < N && !rot(out.H).is_zero()) throw TowerError(ErrorKind::consistency_failure, "rot H is nonzero");
  return out;
}

std::string to_string(const Coefficient& c) {
  if (!c.symbolic()) return to_string(c.scale);
  if (c.scale == 1) return c.symbol;
  return to_string(c.scale) + "*" + c.symbol;
}

Coefficient parse_coefficient(const std::string& text) {
  if (text.empty()) throw TowerError(ErrorKind::parse_error, "empty coefficient");
  try {
    return {parse_rational(text), {}};
  } catch (const TowerError&) {
  }
  const auto star = text.find('*');
  if (star == std::string::npos) return {1, text};
  return {parse_rational(text.substr(0, star)), text.substr(star + 1)};
}

std::optional<Rational> TowerProfile::h_max() const {
  std::optional<Rational> out;
  auto see = [&](const TowerIndex& I) {
    const Rational h(homogeneity_degree(I, N));
    if (!out || h > *out) out = h;
  };
  for (const auto& [I, c] : f) see(I);
  for (const auto& [J, c] : g) see(J);
  return out;
}

void validate_profile(const TowerProfile& p) {
  require_odd_dimension(p.N);
  if (p.q < 1 || p.q > p.N - 2)
    throw TowerError(ErrorKind::invalid_input, "profiles need 1 <= q <= N - 2 (no exceptional forms there)");
  if (is_exceptional_weight(p.s, p.N))
    throw TowerError(ErrorKind::invalid_input, "weight " + to_string(p.s) + " is exceptional");
  auto check = [&](const TowerIndex& I, IndexRole role, int rank) {
    if (!in_index_set({I, role, rank}, p.N))
      throw TowerError(ErrorKind::invalid_input, std::string("no ") + to_string(role) + "^" + std::to_string(rank) +
                                                     " index " + to_string(I));
    if (in_weighted_L2(I, p.s, p.N))
      throw TowerError(ErrorKind::invalid_input,
                       "index " + to_string(I) + " already lies in L^2_" + to_string(p.s) + "; keep only tower parts");
  };
  for (const auto& [I, c] : p.f) check(I, IndexRole::D, p.q);
  for (const auto& [J, c] : p.g) check(J, IndexRole::R, p.q + 1);
}

namespace {

TowerProfile apply_L_step(const TowerProfile& p) {
  TowerProfile out;
  out.N = p.N;
  out.q = p.q;
  out.s = p.s - 1;
  out.l2_weight = p.l2_weight - 1;
  out.step = p.step + 1;
  for (const auto& [J, c] : p.g) out.f[shift(J, 1)] = c;
  for (const auto& [I, c] : p.f) out.g[shift(I, 1)] = c;
  const std::string tag = std::to_string(out.step);
  for (const auto& I : enumerate_excluded(p.N, p.q, 0, out.s))
    out.f.emplace(I, Coefficient{1, "E~" + tag + to_string(I)});
  for (const auto& J : enumerate_excluded(p.N, p.q + 1, 0, out.s, true, IndexRole::R))
    out.g.emplace(J, Coefficient{1, "H~" + tag + to_string(J)});
  return out;
}

void require_ok(const HypothesisReport& rep) {
  if (rep.ok()) return;
  std::string msg;
  for (const auto& c : rep.conditions)
    if (!c.ok) msg += (msg.empty() ? "" : "; ") + c.condition + " (" + c.detail + ")";
  throw TowerError(ErrorKind::hypothesis_violation, std::string(to_string(rep.context)) + ": " + msg);
}

}  // namespace

TowerProfile apply_L_profile(const TowerProfile& p, const Rational& tau) {
  validate_profile(p);
  HypothesisInput in;
  in.N = p.N;
  in.s = p.s;
  in.tau = tau;
  in.h_max = p.h_max();
  require_ok(validate_hypotheses(Hypothesis::def57, in));
  return apply_L_step(p);
}

std::pair<TowerProfile, OperatorRangeDescriptor> apply_L_power(const TowerProfile& p, int j, const Rational& tau) {
  validate_profile(p);
  if (j < 1) throw TowerError(ErrorKind::invalid_input, "power j must be at least 1");
  HypothesisInput in;
  in.N = p.N;
  in.s = p.s;
  in.tau = tau;
  in.j = j;
  in.h_max = p.h_max();
  require_ok(validate_hypotheses(Hypothesis::thm510, in));

  TowerProfile cur = p;
  for (int i = 0; i < j; ++i) cur = apply_L_step(cur);

  OperatorRangeDescriptor d;
  d.j = j;
  d.target_weight = p.s - j;
  d.new_D = enumerate_excluded(p.N, p.q, j - 1, d.target_weight);
  d.new_R = enumerate_excluded(p.N, p.q + 1, j - 1, d.target_weight, true, IndexRole::R);
  for (const auto& [I, c] : p.f) d.shifted_f.push_back(shift(I, j));
  for (const auto& [J, c] : p.g) d.shifted_g.push_back(shift(J, j));
  d.f_lands_on_D = j % 2 == 0;

  const Rational n2 = half(p.N);
  d.t_sup = d.target_weight;
  d.t_sup_attained = true;
  d.t_bounds.push_back("t <= " + to_string(d.target_weight));
  auto strict = [&](const Rational& b) {
    d.t_bounds.push_back("t < " + to_string(b));
    if (b < d.t_sup || (b == d.t_sup && d.t_sup_attained)) {
      d.t_sup = b;
      d.t_sup_attained = false;
    }
  };
  strict(n2 - j + 1);
  if (auto h = p.h_max()) strict(Rational(-j) - n2 - *h);
  return {cur, d};
}

bool range_consistent(const TowerProfile& p, const OperatorRangeDescriptor& d) {
  const Rational n2 = half(p.N);
  auto ok = [&](const TowerIndex& I) {
    if (in_weighted_L2(I, p.s, p.N)) return false;
    // h < -t - N/2 for every admissible t
    const Rational h(homogeneity_degree(I, p.N));
    const Rational edge = -d.t_sup - n2;
    return d.t_sup_attained ? h < edge : h <= edge;
  };
  for (const auto& [I, c] : p.f)
    if (!ok(I)) return false;
  for (const auto& [J, c] : p.g)
    if (!ok(J)) return false;
  return true;
}

CheckReport verify_recursion(int N, int q, const std::map<TowerIndex, Rational>& f,
                             const std::map<TowerIndex, Rational>& g, int j, TowerStore& store) {
  if (j < 1) throw TowerError(ErrorKind::invalid_input, "recursion depth j must be at least 1");
  CheckReport rep;
  int top = 0;
  for (const auto& [I, c] : f) top = std::max(top, I.k);
  for (const auto& [J, c] : g) top = std::max(top, J.k);
  const int max_k = top + j + 1;

  MaxwellPair data = zero_pair(N, q);
  for (const auto& [I, c] : f) {
    store.family(q, I.sign, I.sigma, max_k);
    data.E += store.D(q, I) * c;
  }
  for (const auto& [J, c] : g) {
    store.family(q, J.sign, J.sigma, max_k);
    data.H += store.R(q + 1, J) * c;
  }
  std::map<TowerIndex, Rational> e = f, h = g;
  std::map<TowerIndex, Rational> prof_f = f, prof_g = g;
  for (int step = 1; step <= j; ++step) {
    const std::string loc = "(N=" + std::to_string(N) + ",q=" + std::to_string(q) + ",step=" + std::to_string(step) + ")";
    MaxwellPair next;
    try {
      next = solve_whole_space(data.E, data.H, store, max_k);
      rep.add("whole-space solve: rot E = G, div H = F, div E = 0, rot H = 0", loc, true);
    } catch (const TowerError& err) {
      rep.add("whole-space solve: rot E = G, div H = F, div E = 0, rot H = 0", loc, false, err.what());
      return rep;
    }
    const auto e_next = decompose_D(next.E, max_k, store);
    const auto h_next = decompose_R(next.H, max_k, store);
    // e_I = h~_{1I}, h_J = e~_{1J}
    std::map<TowerIndex, Rational> h_want, e_want;
    for (const auto& [I, c] : e) h_want[shift(I, 1)] = c;
    for (const auto& [J, c] : h) e_want[shift(J, 1)] = c;
    rep.add("coefficient recursion e_I = h~_{1I}", loc, h_next == h_want);
    rep.add("coefficient recursion h_J = e~_{1J}", loc, e_next == e_want);

    std::map<TowerIndex, Rational> pf, pg;
    for (const auto& [J, c] : prof_g) pf[shift(J, 1)] = c;
    for (const auto& [I, c] : prof_f) pg[shift(I, 1)] = c;
    prof_f = std::move(pf);
    prof_g = std::move(pg);
    const auto ex = expand(next, top + step + 1, store);
    rep.add("expansion of the solution matches the profile", loc,
            ex.in_span() && ex.e_coeffs == prof_f && ex.h_coeffs == prof_g);
    data = next;
    e = e_next;
    h = h_next;
  }
  return rep;
}

namespace {

nlohmann::json coeff_json(const std::map<TowerIndex, Coefficient>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [I, c] : m) out.push_back({{"index", to_json(I)}, {"coeff", to_string(c)}});
  return out;
}

std::map<TowerIndex, Coefficient> coeff_from_json(const nlohmann::json& arr) {
  std::map<TowerIndex, Coefficient> out;
  for (const auto& e : arr) out[index_from_json(e.at("index"))] = parse_coefficient(e.at("coeff").get<std::string>());
  return out;
}

nlohmann::json index_list(const std::vector<TowerIndex>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& I : v) out.push_back(to_json(I));
  return out;
}

}  // namespace

nlohmann::json to_json(const TowerProfile& p) {
  return {{"schema", "towercalc/1"}, {"kind", "profile"}, {"N", p.N},
          {"q", p.q},                {"s", to_string(p.s)}, {"step", p.step},
          {"l2_weight", to_string(p.l2_weight)}, {"f", coeff_json(p.f)}, {"g", coeff_json(p.g)}};
}

TowerProfile profile_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("schema") && j.at("schema") != "towercalc/1")
      throw TowerError(ErrorKind::parse_error, "unsupported schema " + j.at("schema").dump());
    TowerProfile p;
    p.N = j.at("N").get<int>();
    p.q = j.at("q").get<int>();
    p.s = parse_rational(j.at("s").get<std::string>());
    p.step = j.value("step", 0);
    p.l2_weight = j.contains("l2_weight") ? parse_rational(j.at("l2_weight").get<std::string>()) : p.s;
    if (j.contains("f")) p.f = coeff_from_json(j.at("f"));
    if (j.contains("g")) p.g = coeff_from_json(j.at("g"));
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw TowerError(ErrorKind::parse_error, std::string("profile: ") + e.what());
  }
}

nlohmann::json to_json(const OperatorRangeDescriptor& d) {
  return {{"j", d.j},
          {"target_weight", to_string(d.target_weight)},
          {"new_D", index_list(d.new_D)},
          {"new_R", index_list(d.new_R)},
          {"shifted_f", index_list(d.shifted_f)},
          {"shifted_g", index_list(d.shifted_g)},
          {"f_lands_on", d.f_lands_on_D ? "D" : "R"},
          {"t_sup", to_string(d.t_sup)},
          {"t_sup_attained", d.t_sup_attained},
          {"t_bounds", d.t_bounds}};
}

}  // namespace towercalc
