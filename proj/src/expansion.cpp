#include "towercalc/expansion.hpp"

#include <algorithm>

#include "towercalc/error.hpp"
#include "towercalc/linalg.hpp"

namespace towercalc {

MaxwellPair zero_pair(int N, int q) { return {Form(N, q), Form(N, q + 1)}; }

MaxwellPair apply_M(const MaxwellPair& p) { return {div(p.H), rot(p.E)}; }

namespace {

void require_pair(const MaxwellPair& p) {
  if (p.E.dimension() != p.H.dimension())
    throw TowerError(ErrorKind::dimension_mismatch, "E and H live in different dimensions");
  if (p.H.grade() != p.E.grade() + 1)
    throw TowerError(ErrorKind::invalid_input, "H must have grade q + 1 for E of grade q");
}

}  // namespace

bool iterated_maxwell_check(const MaxwellPair& p, int K) {
  if (K < 1) throw TowerError(ErrorKind::invalid_input, "K must be at least 1");
  require_pair(p);
  if (p.E.grade() > 0 && !div(p.E).is_zero()) return false;
  if (p.H.grade() < p.H.dimension() && !rot(p.H).is_zero()) return false;
  MaxwellPair cur = p;
  for (int i = 0; i < K && !cur.is_zero(); ++i) cur = apply_M(cur);
  return cur.is_zero();
}

namespace {

struct Projection {
  std::vector<Rational> coeffs;
  Form residual;
  bool nonsingular = true;
};

// Orthogonal projection of a homogeneous form onto the span of forms of the
// same degree. Forms whose sphere restrictions never meet are solved in
// separate blocks.
Projection gram_project(const Form& target, const std::vector<Form>& forms) {
  const std::size_t n = forms.size();
  Projection out;
  out.coeffs.assign(n, Rational(0));
  out.residual = target;
  if (n == 0) return out;
  std::vector<SphereRestriction> fs;
  fs.reserve(n);
  for (const auto& f : forms) fs.push_back(restrict_to_sphere(f));
  const SphereRestriction t = restrict_to_sphere(target);

  DenseMatrix g(n, std::vector<Rational>(n));
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      g[i][j] = g[j][i] = sphere_inner_product(fs[i], fs[j]);
      if (i != j && sgn(g[i][j]) != 0) parent[find(i)] = find(j);
    }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  for (const auto& [root, idx] : groups) {
    DenseMatrix a(idx.size(), std::vector<Rational>(idx.size()));
    DenseMatrix b(idx.size(), std::vector<Rational>(1));
    bool any = false;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) a[r][c] = g[idx[r]][idx[c]];
      b[r][0] = sphere_inner_product(fs[idx[r]], t);
      any = any || sgn(b[r][0]) != 0;
    }
    if (sgn(determinant(a)) == 0) {
      out.nonsingular = false;
      continue;
    }
    if (!any) continue;
    DenseMatrix x;
    solve_square(a, b, x);
    for (std::size_t r = 0; r < idx.size(); ++r) out.coeffs[idx[r]] = x[r][0];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (sgn(out.coeffs[i]) != 0) out.residual -= forms[i] * out.coeffs[i];
  return out;
}

struct Candidate {
  TowerIndex index;
  bool exceptional = false;
  Form form;
};

// Tower indices of height <= max_k whose floor has the given degree.
std::vector<TowerIndex> indices_of_degree(int N, int h, int max_k, bool D_side, int rank, TowerStore& store) {
  std::vector<TowerIndex> out;
  for (Sign sign : {Sign::plus, Sign::minus}) {
    for (int k = 0; k <= max_k; ++k) {
      const int sigma = sign == Sign::plus ? h - k : k - N - h;
      if (sigma < 0) continue;
      const int count = D_side ? store.d_count(rank, sign, k, sigma) : store.r_count(rank, sign, k, sigma);
      for (int m = 1; m <= count; ++m) out.push_back({sign, k, sigma, m});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Form fetch(TowerStore& store, bool D_side, int rank, const TowerIndex& I) {
  const int family_q = D_side ? rank : rank - 1;
  store.family(family_q, I.sign, I.sigma, I.k);
  return D_side ? store.D(rank, I) : store.R(rank, I);
}

TowerIndex exceptional_index(const ExceptionalFormDescriptor& d) { return {Sign::minus, d.height, 0, 1}; }

Form exceptional_from_store(const ExceptionalFormDescriptor& d, TowerStore& store) {
  const TowerIndex I = exceptional_index(d);
  return -(d.is_D ? store.D(d.rank, I) : store.R(d.rank, I));
}

struct SideResult {
  std::map<TowerIndex, Rational> coeffs;
  std::optional<Rational> hat;
  Form residual;
};

// Projects every homogeneous piece of f onto tower forms of one kind plus an
// optional exceptional form.
SideResult project_side(const Form& f, const std::vector<TowerIndex>* allowed, bool D_side, int rank, int max_k,
                        const ExceptionalFormDescriptor& hat, TowerStore& store, const char* side,
                        std::vector<GramSolve>* solves) {
  const int N = f.dimension();
  SideResult out;
  out.residual = Form(N, f.grade());
  if (!hat.zero) out.hat = Rational(0);
  for (const auto& [h, piece] : homogeneity_split(f)) {
    std::vector<Candidate> cands;
    if (allowed) {
      for (const auto& I : *allowed) {
        if (homogeneity_degree(I, N) != h) continue;
        const int count = D_side ? store.d_count(rank, I.sign, I.k, I.sigma) : store.r_count(rank, I.sign, I.k, I.sigma);
        if (I.m <= count) cands.push_back({I, false, fetch(store, D_side, rank, I)});
      }
    } else {
      for (const auto& I : indices_of_degree(N, h, max_k, D_side, rank, store))
        cands.push_back({I, false, fetch(store, D_side, rank, I)});
    }
    if (!hat.zero && floor_degree(Sign::minus, hat.height, 0, N) == h)
      cands.push_back({exceptional_index(hat), true, exceptional_from_store(hat, store)});
    std::vector<Form> forms;
    forms.reserve(cands.size());
    for (const auto& c : cands) forms.push_back(c.form);
    Projection p = gram_project(piece, forms);
    if (!p.nonsingular)
      throw TowerError(ErrorKind::consistency_failure,
                       std::string("singular Gram matrix for ") + side + " at degree " + std::to_string(h));
    if (solves) solves->push_back({side, h, static_cast<int>(forms.size()), p.nonsingular});
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (sgn(p.coeffs[i]) == 0) continue;
      if (cands[i].exceptional) out.hat = p.coeffs[i];
      else out.coeffs[cands[i].index] = p.coeffs[i];
    }
    out.residual += p.residual;
  }
  return out;
}

}  // namespace

ExpansionResult expand(const MaxwellPair& p, int K, TowerStore& store) {
  require_pair(p);
  const int N = p.E.dimension();
  const int q = p.E.grade();
  if (N != store.dimension()) throw TowerError(ErrorKind::dimension_mismatch, "tower store has another dimension");
  if (q > N - 1) throw TowerError(ErrorKind::invalid_input, "expansion needs 0 <= q <= N - 1");
  if (!iterated_maxwell_check(p, K))
    throw TowerError(ErrorKind::invalid_input, "input does not solve the iterated Maxwell system with K = " +
                                                   std::to_string(K));
  ExpansionResult res;
  res.N = N;
  res.q = q;
  res.K = K;
  res.D_hat = exceptional_form(ExceptionalKind::D_hat, N, q, K);
  res.R_hat = exceptional_form(ExceptionalKind::R_hat, N, q, K);
  auto e = project_side(p.E, nullptr, true, q, K - 1, res.D_hat, store, "E", &res.solves);
  auto h = project_side(p.H, nullptr, false, q + 1, K - 1, res.R_hat, store, "H", &res.solves);
  res.e_coeffs = std::move(e.coeffs);
  res.h_coeffs = std::move(h.coeffs);
  res.e_hat = e.hat;
  res.h_hat = h.hat;
  res.residual = {e.residual, h.residual};
  return res;
}

SpanProjection project_onto_towers(const Form& f, bool D_side, int max_k, TowerStore& store) {
  if (f.dimension() != store.dimension())
    throw TowerError(ErrorKind::dimension_mismatch, "tower store has another dimension");
  auto side = project_side(f, nullptr, D_side, f.grade(), max_k, ExceptionalFormDescriptor{}, store,
                           D_side ? "D" : "R", nullptr);
  return {std::move(side.coeffs), std::move(side.residual)};
}

MaxwellPair reconstruct(const ExpansionResult& res, TowerStore& store) {
  MaxwellPair out = zero_pair(res.N, res.q);
  for (const auto& [I, c] : res.e_coeffs) out.E += fetch(store, true, res.q, I) * c;
  for (const auto& [J, c] : res.h_coeffs) out.H += fetch(store, false, res.q + 1, J) * c;
  if (res.e_hat && sgn(*res.e_hat) != 0) out.E += exceptional_from_store(res.D_hat, store) * *res.e_hat;
  if (res.h_hat && sgn(*res.h_hat) != 0) out.H += exceptional_from_store(res.R_hat, store) * *res.h_hat;
  return out;
}

MembershipReport membership_filter(const ExpansionResult& res, const Rational& s, int m) {
  MembershipReport rep;
  rep.s = s;
  rep.m = m;
  rep.threshold = -s - half(res.N);
  auto consider = [&](const char* side, const TowerIndex& I, const Rational& c) {
    if (sgn(c) == 0) return;
    const int h = homogeneity_degree(I, res.N);
    const bool by_degree = Rational(h) >= rep.threshold;
    const bool by_sign = I.sign == Sign::plus ? Rational(I.k + I.sigma) >= rep.threshold
                                              : Rational(I.k - I.sigma) >= -s + half(res.N);
    if (by_degree != by_sign) rep.sign_rule_agrees = false;
    if (by_degree) rep.offending.push_back({side, I, c, h, by_sign});
  };
  for (const auto& [I, c] : res.e_coeffs) consider("E", I, c);
  for (const auto& [J, c] : res.h_coeffs) consider("H", J, c);
  if (res.e_hat) consider("E-hat", exceptional_index(res.D_hat), *res.e_hat);
  if (res.h_hat) consider("H-hat", exceptional_index(res.R_hat), *res.h_hat);
  return rep;
}

bool form_in_weighted_L2(const Form& f, const Rational& s) {
  const Rational bound = -s - half(f.dimension());
  for (int h : f.degrees())
    if (Rational(h) >= bound) return false;
  return true;
}

const char* to_string(Lemma34Class c) {
  switch (c) {
    case Lemma34Class::in_L2: return "in-L2";
    case Lemma34Class::rot_branch: return "R-floors<=1+R-check^{q,2}";
    case Lemma34Class::div_branch: return "D-floors<=1+D-check^{q,2}";
    case Lemma34Class::floor0_branch: return "D-floor0+D-check^{q,1}";
    case Lemma34Class::unresolved: return "unresolved";
  }
  return "?";
}

Lemma34Report lemma34_classify(const Form& E, const Rational& s, TowerStore& store,
                               std::optional<Lemma34Flags> asserted) {
  const int N = E.dimension();
  const int q = E.grade();
  if (N != store.dimension()) throw TowerError(ErrorKind::dimension_mismatch, "tower store has another dimension");
  if (!laplacian(E).is_zero()) throw TowerError(ErrorKind::invalid_input, "E is not harmonic");
  if (s < -half(N)) throw TowerError(ErrorKind::invalid_input, "classification needs s >= -N/2");
  if (!form_in_weighted_L2(E, -half(N)))
    throw TowerError(ErrorKind::invalid_input, "E must lie in L^2_{-N/2} (all degrees negative)");

  Lemma34Report rep;
  rep.s = s;
  rep.flags.rot_ok = q == N || form_in_weighted_L2(rot(E), s + 1);
  rep.flags.div_ok = q == 0 || form_in_weighted_L2(div(E), s + 1);
  rep.asserted = asserted;
  if (asserted) rep.flags_agree = asserted->rot_ok == rep.flags.rot_ok && asserted->div_ok == rep.flags.div_ok;
  rep.residual = Form(N, q);

  Form rest(N, q);
  const Rational bound = -s - half(N);
  for (const auto& [h, piece] : homogeneity_split(E))
    if (Rational(h) >= bound) {
      rep.nonintegrable_degrees.push_back(h);
      rest += piece;
    }
  rep.exceptional = exceptional_form(ExceptionalKind::D_check_s, N, std::min(q, N), 1, s);
  if (rest.is_zero()) {
    rep.cls = Lemma34Class::in_L2;
    return rep;
  }

  std::vector<TowerIndex> allowed;
  bool D_side = true;
  int max_k = 1;
  if (rep.flags.rot_ok && rep.flags.div_ok) {
    rep.cls = Lemma34Class::floor0_branch;
    allowed = enumerate_excluded(N, q, 0, s);
    max_k = 0;
  } else if (rep.flags.div_ok) {
    rep.cls = Lemma34Class::div_branch;
    allowed = enumerate_excluded(N, q, 1, s);
    rep.exceptional = exceptional_form(ExceptionalKind::D_check_s, N, q, 2, s);
  } else if (rep.flags.rot_ok) {
    rep.cls = Lemma34Class::rot_branch;
    D_side = false;
    allowed = enumerate_excluded(N, q, 1, s, true, IndexRole::R);
    rep.exceptional = exceptional_form(ExceptionalKind::R_check_s, N, q - 1, 2, s);
  } else {
    rep.cls = Lemma34Class::unresolved;
    rep.residual = rest;
    return rep;
  }
  auto side = project_side(rest, &allowed, D_side, q, max_k, rep.exceptional, store, "E", nullptr);
  rep.coeffs = std::move(side.coeffs);
  rep.exceptional_coeff = side.hat;
  rep.residual = side.residual;
  return rep;
}

nlohmann::json to_json(const MaxwellPair& p) {
  return {{"schema", "towercalc/1"}, {"kind", "maxwell-pair"}, {"N", p.E.dimension()}, {"q", p.E.grade()},
          {"E", to_json(p.E)}, {"H", to_json(p.H)}};
}

MaxwellPair pair_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("schema") && j.at("schema") != "towercalc/1")
      throw TowerError(ErrorKind::parse_error, "unsupported schema " + j.at("schema").dump());
    MaxwellPair p{form_from_json(j.at("E")), form_from_json(j.at("H"))};
    require_pair(p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw TowerError(ErrorKind::parse_error, std::string("maxwell pair: ") + e.what());
  }
}

namespace {

nlohmann::json coeff_list(const std::map<TowerIndex, Rational>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [I, c] : m) out.push_back({{"index", to_json(I)}, {"coeff", to_string(c)}});
  return out;
}

nlohmann::json hat_json(const ExceptionalFormDescriptor& d, const std::optional<Rational>& c) {
  nlohmann::json j = {{"form", d.label}};
  j["coeff"] = c ? nlohmann::json(to_string(*c)) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

nlohmann::json to_json(const ExpansionResult& r) {
  nlohmann::json solves = nlohmann::json::array();
  for (const auto& g : r.solves)
    solves.push_back({{"side", g.side}, {"degree", g.degree}, {"size", g.size}, {"nonsingular", g.nonsingular}});
  return {{"schema", "towercalc/1"},
          {"kind", "expansion"},
          {"N", r.N},
          {"q", r.q},
          {"K", r.K},
          {"e_coeffs", coeff_list(r.e_coeffs)},
          {"h_coeffs", coeff_list(r.h_coeffs)},
          {"e_hat", hat_json(r.D_hat, r.e_hat)},
          {"h_hat", hat_json(r.R_hat, r.h_hat)},
          {"in_span", r.in_span()},
          {"residual", to_json(r.residual)},
          {"gram_solves", solves}};
}

nlohmann::json to_json(const MembershipReport& r) {
  nlohmann::json off = nlohmann::json::array();
  for (const auto& o : r.offending)
    off.push_back({{"side", o.side},
                   {"index", to_json(o.index)},
                   {"coeff", to_string(o.coefficient)},
                   {"degree", o.degree},
                   {"sign_rule", o.by_sign_rule}});
  return {{"s", to_string(r.s)},         {"m", r.m},
          {"threshold", to_string(r.threshold)}, {"verdict", r.in_space() ? "in" : "out"},
          {"sign_rule_agrees", r.sign_rule_agrees}, {"offending", off}};
}

nlohmann::json to_json(const Lemma34Report& r) {
  nlohmann::json j = {{"s", to_string(r.s)},
                      {"rot_ok", r.flags.rot_ok},
                      {"div_ok", r.flags.div_ok},
                      {"flags_agree", r.flags_agree},
                      {"class", to_string(r.cls)},
                      {"nonintegrable_degrees", r.nonintegrable_degrees},
                      {"coeffs", coeff_list(r.coeffs)},
                      {"exceptional", hat_json(r.exceptional, r.exceptional_coeff)},
                      {"residual_zero", r.residual.is_zero()}};
  return j;
}

}  // namespace towercalc
