#include "towercalc/towers.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include "towercalc/error.hpp"
#include "towercalc/harmonic_spaces.hpp"
#include "towercalc/linalg.hpp"

namespace towercalc {

const char* to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

Sign parse_sign(const std::string& s) {
  if (s == "+" || s == "plus") return Sign::plus;
  if (s == "-" || s == "minus") return Sign::minus;
  throw TowerError(ErrorKind::parse_error, "sign must be plus or minus, got '" + s + "'");
}

std::string to_string(const TowerIndex& I) {
  return std::string("(") + to_string(I.sign) + "," + std::to_string(I.k) + "," + std::to_string(I.sigma) + "," +
         std::to_string(I.m) + ")";
}

nlohmann::json to_json(const TowerIndex& I) {
  return {{"sign", to_string(I.sign)}, {"k", I.k}, {"sigma", I.sigma}, {"m", I.m}};
}

TowerIndex index_from_json(const nlohmann::json& j) {
  TowerIndex I;
  try {
    I.sign = parse_sign(j.at("sign").get<std::string>());
    I.k = j.at("k").get<int>();
    I.sigma = j.at("sigma").get<int>();
    I.m = j.at("m").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw TowerError(ErrorKind::parse_error, std::string("tower index: ") + e.what());
  }
  if (I.k < 0 || I.sigma < 0 || I.m < 1) throw TowerError(ErrorKind::invalid_input, "tower index out of range");
  return I;
}

int floor_degree(Sign sign, int k, int sigma, int N) { return sign == Sign::plus ? k + sigma : k - sigma - N; }

namespace {

Rational plus_base(int q, int sigma, int N) {
  const int e = 1 + (q == 0 ? 1 : 0) + (q == N ? 1 : 0);
  return make_rational(e % 2 == 0 ? 1 : -1, 2 * sigma + N);
}

void check_alpha_args(int q, int sigma, int k, int N) {
  if (N < 1 || q < 0 || q > N || sigma < 0 || k < 0)
    throw TowerError(ErrorKind::invalid_input, "alpha: arguments out of range");
}

// Gamma(n/2) for an integer n not a nonpositive even number, as c * sqrt(pi)^e.
struct HalfGamma {
  Rational c;
  int sqrt_pi = 0;
};

BigInt factorial(long n) {
  BigInt f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

HalfGamma gamma_half(long n) {
  if (n % 2 == 0) {
    if (n <= 0) throw TowerError(ErrorKind::unsupported_dimension, "Gamma pole at a nonpositive integer");
    return {Rational(factorial(n / 2 - 1)), 0};
  }
  if (n > 0) {  // Gamma(j + 1/2) = (2j)! / (4^j j!) sqrt(pi)
    const long j = (n - 1) / 2;
    BigInt four = 1;
    for (long i = 0; i < j; ++i) four *= 4;
    return {make_rational(factorial(2 * j), four * factorial(j)), 1};
  }
  // Gamma(1/2 - j) = (-4)^j j! / (2j)! sqrt(pi)
  const long j = (1 - n) / 2;
  BigInt four = 1;
  for (long i = 0; i < j; ++i) four *= -4;
  return {make_rational(four * factorial(j), factorial(2 * j)), 1};
}

}  // namespace

Rational alpha(Sign sign, int q, int sigma, int k, int N) {
  check_alpha_args(q, sigma, k, N);
  Rational a = sign == Sign::minus ? Rational(1) : plus_base(q, sigma, N);
  for (int j = 1; j <= k; ++j) {
    const int d = sign == Sign::plus ? 2 * j + 2 * sigma + N : 2 * j - 2 * sigma - N;
    if (d == 0)
      throw TowerError(ErrorKind::unsupported_dimension,
                       "alpha recursion divides by zero at k=" + std::to_string(j) + " (even N=" + std::to_string(N) +
                           ")");
    a /= Rational(2 * j * d);
  }
  return a;
}

Rational alpha_closed_form(Sign sign, int q, int sigma, int k, int N) {
  check_alpha_args(q, sigma, k, N);
  // Gamma(1 +- (N/2 + sigma)) / Gamma(k + 1 +- (N/2 + sigma)), arguments doubled.
  const long shift = sign == Sign::plus ? N + 2L * sigma : -(N + 2L * sigma);
  const HalfGamma top = gamma_half(2 + shift);
  const HalfGamma bottom = gamma_half(2L * k + 2 + shift);
  if (top.sqrt_pi != bottom.sqrt_pi) throw TowerError(ErrorKind::consistency_failure, "Gamma ratio not rational");
  BigInt four = 1;
  for (int i = 0; i < k; ++i) four *= 4;
  Rational a = top.c / (bottom.c * Rational(four * factorial(k)));
  if (sign == Sign::plus) a *= plus_base(q, sigma, N);
  return a;
}

bool TowerFamily::empty() const {
  for (const auto& f : D)
    if (!f.empty()) return false;
  for (const auto& f : R)
    if (!f.empty()) return false;
  return true;
}

int mu_or_zero(int N, int q, int sigma) {
  if (q < 0 || q > N) return 0;
  return mu_closed_form(N, q, sigma);
}

namespace {

bool zero_chain_D(int N, int q, Sign sign, int sigma) { return sign == Sign::minus && sigma == 0 && q == 0 && N > 0; }
bool zero_chain_R(int N, int q, Sign sign, int sigma) { return sign == Sign::minus && sigma == 0 && q == N - 1; }

}  // namespace

int expected_D_count(int N, int q, Sign sign, int sigma, int k) {
  if (q == N) return k == 0 && sign == Sign::plus ? mu_closed_form(N, N, sigma) : 0;
  if (k == 0 && zero_chain_D(N, q, sign, sigma)) return 0;
  return k % 2 == 0 ? mu_or_zero(N, q, sigma) : mu_or_zero(N, q + 1, sigma);
}

int expected_R_count(int N, int q, Sign sign, int sigma, int k) {
  if (q == N) return 0;
  if (k == 0 && zero_chain_R(N, q, sign, sigma)) return 0;
  return k % 2 == 0 ? mu_or_zero(N, q + 1, sigma) : mu_or_zero(N, q, sigma);
}

namespace {

enum class LiftKind { D, R };  // D: rot x = t, div x = 0.  R: div x = t, rot x = 0.

std::string where(int N, int rank, int h, std::uint32_t block) {
  return "(N=" + std::to_string(N) + ", rank=" + std::to_string(rank) + ", degree=" + std::to_string(h) +
         ", block=" + std::to_string(block) + ")";
}

// Solves all targets of one parity block at once.
std::vector<CoordVec> lift_block(int N, int rank, int h, std::uint32_t block, bool polynomial, LiftKind kind,
                                 const std::vector<const CoordVec*>& targets) {
  const auto seeds = SeedCache::global().block(N, rank, h, block, -1);
  int max_depth = 0;
  for (const auto* t : targets) max_depth = std::max(max_depth, coord_depth(*t));
  int depth = polynomial ? h : max_depth + 1;
  const int cap = std::abs(h) + rank + 8;
  const int T = static_cast<int>(targets.size());
  while (true) {
    const auto keys = ansatz_keys(N, rank, h, block, depth, polynomial);
    const int n = static_cast<int>(keys.size());
    std::map<CoordKey, SparseRow, CoordKeyLess> rot_rows, div_rows;
    for (int j = 0; j < n; ++j) {
      if (rank < N)
        for (const auto& [k, c] : rot_of_key(N, h, keys[j])) rot_rows[k].emplace_back(j, c);
      if (rank > 0)
        for (const auto& [k, c] : div_of_key(N, h, keys[j])) div_rows[k].emplace_back(j, c);
    }
    auto& rhs_rows = kind == LiftKind::D ? rot_rows : div_rows;
    for (int t = 0; t < T; ++t)
      for (const auto& [k, c] : *targets[t]) rhs_rows[k].emplace_back(n + t, c);

    RowEchelon ech(n + T, n);
    for (const auto& [k, row] : rot_rows) ech.add_row(row);
    for (const auto& [k, row] : div_rows) ech.add_row(row);
    if (polynomial) {
      // Harmonic seeds pair only with the r-free keys (Fischer duality).
      for (const auto& d : seeds->duals) {
        SparseRow row;
        for (const auto& [k, c] : d) {
          auto it = std::lower_bound(keys.begin(), keys.end(), k, CoordKeyLess{});
          if (it != keys.end() && *it == k) row.emplace_back(static_cast<int>(it - keys.begin()), c);
        }
        ech.add_row(row);
      }
    } else {
      for (const auto& s : seeds->basis) {
        SparseRow row;
        for (int j = 0; j < n; ++j) {
          Rational v = coord_inner(N, CoordVec{{keys[j], Rational(1)}}, s);
          if (sgn(v) != 0) row.emplace_back(j, std::move(v));
        }
        ech.add_row(row);
      }
    }
    if (!ech.consistent()) {
      if (polynomial)
        throw TowerError(ErrorKind::construction_failure, "lift has no polynomial solution " + where(N, rank, h, block));
      depth += 2;
      if (depth > cap)
        throw TowerError(ErrorKind::construction_failure,
                         "lift has no solution up to depth " + std::to_string(cap) + " " + where(N, rank, h, block));
      continue;
    }
    if (ech.rank() < n)
      throw TowerError(ErrorKind::construction_failure, "lift is not unique " + where(N, rank, h, block));
    ech.reduce();
    std::vector<CoordVec> out;
    for (const auto& sol : ech.particular_solutions()) {
      CoordVec v;
      for (const auto& [c, x] : sol) v.emplace_back(keys[c], x);
      sort_coords(v);
      out.push_back(std::move(v));
    }
    return out;
  }
}

std::vector<CoordVec> lift(int N, int rank, int h, bool polynomial, LiftKind kind, const std::vector<CoordVec>& targets,
                           ExecPolicy policy) {
  std::map<std::uint32_t, std::vector<int>> by_block;
  for (int i = 0; i < static_cast<int>(targets.size()); ++i) {
    if (targets[i].empty()) throw TowerError(ErrorKind::construction_failure, "zero lift target");
    by_block[block_of(targets[i].front().first)].push_back(i);
  }
  std::vector<std::pair<std::uint32_t, std::vector<int>>> jobs(by_block.begin(), by_block.end());
  std::vector<CoordVec> out(targets.size());
  for_each_index(policy, static_cast<int>(jobs.size()), [&](int j) {
    std::vector<const CoordVec*> ts;
    for (int i : jobs[j].second) ts.push_back(&targets[i]);
    auto sols = lift_block(N, rank, h, jobs[j].first, polynomial, kind, ts);
    for (std::size_t t = 0; t < sols.size(); ++t) out[jobs[j].second[t]] = std::move(sols[t]);
  });
  return out;
}

// The seed family that starts a chain whose ground floor vanishes.
bool appends_R1(int N, int q, Sign sign, int sigma) { return zero_chain_D(N, q, sign, sigma) && q < N; }
bool appends_D1(int N, int q, Sign sign, int sigma) { return zero_chain_R(N, q, sign, sigma); }

std::vector<Form> to_forms(int N, int rank, int h, const std::vector<CoordVec>& vs) {
  std::vector<Form> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(coords_to_form(N, rank, h, v));
  return out;
}

}  // namespace

TowerFamily build_tower_pair(int N, int q, Sign sign, int sigma, int K, ExecPolicy policy) {
  require_odd_dimension(N);
  if (N > kMaxDim) throw TowerError(ErrorKind::invalid_input, "N too large");
  if (q < 0 || q > N) throw TowerError(ErrorKind::invalid_input, "rank q out of range");
  if (sigma < 0 || K < 0) throw TowerError(ErrorKind::invalid_input, "sigma and K must be nonnegative");
  if (mu_or_zero(N, q, sigma) + mu_or_zero(N, q + 1, sigma) == 0)
    throw TowerError(ErrorKind::invalid_input, "empty family: mu_sigma^q + mu_sigma^{q+1} = 0 (N=" + std::to_string(N) +
                                                   ", q=" + std::to_string(q) + ", sigma=" + std::to_string(sigma) +
                                                   ")");
  TowerFamily fam;
  fam.N = N;
  fam.q = q;
  fam.sign = sign;
  fam.sigma = sigma;
  fam.K = K;
  fam.omega_sq = Rational((q + sigma) * (N - q + sigma));
  fam.D.resize(K + 1);
  fam.R.resize(K + 1);
  fam.Dc.resize(K + 1);
  fam.Rc.resize(K + 1);

  const bool polynomial = sign == Sign::plus;
  const int h0 = fam.degree(0);
  fam.Dc[0] = seed_basis(N, q, h0, -1, policy).coords;
  if (q < N) fam.Rc[0] = seed_basis(N, q + 1, h0, -1, policy).coords;

  for (int k = 1; k <= K; ++k) {
    const int h = fam.degree(k);
    if (q < N) {
      fam.Dc[k] = lift(N, q, h, polynomial, LiftKind::D, fam.Rc[k - 1], policy);
      fam.Rc[k] = lift(N, q + 1, h, polynomial, LiftKind::R, fam.Dc[k - 1], policy);
    }
    if (k == 1 && appends_D1(N, q, sign, sigma))
      for (auto& v : seed_basis(N, q, h, -1, policy).coords) fam.Dc[k].push_back(std::move(v));
    if (k == 1 && appends_R1(N, q, sign, sigma))
      for (auto& v : seed_basis(N, q + 1, h, -1, policy).coords) fam.Rc[k].push_back(std::move(v));
  }
  for (int k = 0; k <= K; ++k) {
    fam.D[k] = to_forms(N, q, fam.degree(k), fam.Dc[k]);
    if (q < N) fam.R[k] = to_forms(N, q + 1, fam.degree(k), fam.Rc[k]);
  }
  return fam;
}

void attach_coordinates(TowerFamily& fam) {
  fam.Dc.assign(fam.D.size(), {});
  fam.Rc.assign(fam.R.size(), {});
  for (std::size_t k = 0; k < fam.D.size(); ++k)
    for (const auto& f : fam.D[k]) fam.Dc[k].push_back(form_to_coords(f, fam.degree(static_cast<int>(k))));
  for (std::size_t k = 0; k < fam.R.size(); ++k)
    for (const auto& f : fam.R[k]) fam.Rc[k].push_back(form_to_coords(f, fam.degree(static_cast<int>(k))));
}

nlohmann::json to_json(const TowerFamily& fam) {
  auto floors = [](const std::vector<std::vector<Form>>& fl) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& floor : fl) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& f : floor) row.push_back(to_json(f));
      out.push_back(row);
    }
    return out;
  };
  return {{"schema", "towercalc/1"},
          {"kind", "tower-family"},
          {"N", fam.N},
          {"q", fam.q},
          {"sign", to_string(fam.sign)},
          {"sigma", fam.sigma},
          {"K", fam.K},
          {"omega_sq", to_string(fam.omega_sq)},
          {"D_floors", floors(fam.D)},
          {"R_floors", floors(fam.R)}};
}

TowerFamily family_from_json(const nlohmann::json& j) {
  TowerFamily fam;
  try {
    if (j.value("schema", "") != "towercalc/1" || j.value("kind", "") != "tower-family")
      throw TowerError(ErrorKind::parse_error, "not a towercalc/1 tower-family document");
    fam.N = j.at("N").get<int>();
    fam.q = j.at("q").get<int>();
    fam.sign = parse_sign(j.at("sign").get<std::string>());
    fam.sigma = j.at("sigma").get<int>();
    fam.K = j.at("K").get<int>();
    fam.omega_sq = parse_rational(j.at("omega_sq").get<std::string>());
    if (fam.N < 1 || fam.N > kMaxDim || fam.q < 0 || fam.q > fam.N || fam.sigma < 0 || fam.K < 0)
      throw TowerError(ErrorKind::parse_error, "family header out of range");
    auto floors = [&](const char* name, int rank, std::vector<std::vector<Form>>& out) {
      for (const auto& row : j.at(name)) {
        out.emplace_back();
        for (const auto& fj : row) {
          Form f = form_from_json(fj);
          if (f.dimension() != fam.N || f.grade() != rank)
            throw TowerError(ErrorKind::parse_error, std::string(name) + ": form has wrong dimension or rank");
          out.back().push_back(std::move(f));
        }
      }
    };
    floors("D_floors", fam.q, fam.D);
    floors("R_floors", fam.q + 1, fam.R);
  } catch (const nlohmann::json::exception& e) {
    throw TowerError(ErrorKind::parse_error, std::string("tower family: ") + e.what());
  }
  return fam;
}

bool CheckReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.ok; });
}

std::vector<CheckItem> CheckReport::failures() const {
  std::vector<CheckItem> out;
  for (const auto& i : items)
    if (!i.ok) out.push_back(i);
  return out;
}

void CheckReport::add(std::string relation, std::string loc, bool ok, std::string detail) {
  items.push_back({std::move(relation), std::move(loc), ok, std::move(detail)});
}

void CheckReport::merge(const CheckReport& other) { items.insert(items.end(), other.items.begin(), other.items.end()); }

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& i : r.items) {
    nlohmann::json it = {{"relation", i.relation}, {"location", i.location}, {"ok", i.ok}};
    if (!i.detail.empty()) it["detail"] = i.detail;
    items.push_back(it);
  }
  return {{"ok", r.ok()}, {"checked", r.items.size()}, {"failures", r.failures().size()}, {"items", items}};
}

std::string location(const TowerFamily& fam, int k, int m) {
  return "(q=" + std::to_string(fam.q) + "," + to_string(fam.sign) + ",sigma=" + std::to_string(fam.sigma) +
         ",k=" + std::to_string(k) + ",m=" + std::to_string(m) + ")";
}

namespace {

bool homogeneous_of(const Form& f, int degree) {
  const auto ds = f.degrees();
  return !f.is_zero() && ds.size() == 1 && ds.front() == degree;
}

std::string family_location(const TowerFamily& fam, int k) {
  return "(q=" + std::to_string(fam.q) + "," + to_string(fam.sign) + ",sigma=" + std::to_string(fam.sigma) +
         ",k=" + std::to_string(k) + ")";
}

std::vector<SphereRestriction> restrict_all(const std::vector<Form>& fs) {
  std::vector<SphereRestriction> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(restrict_to_sphere(f));
  return out;
}

// The Gram matrix splits into blocks of mutually coupled forms; each block
// must have nonzero determinant.
bool gram_nonsingular(const std::vector<SphereRestriction>& fs) {
  const std::size_t n = fs.size();
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
    DenseMatrix sub(idx.size(), std::vector<Rational>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) sub[a][b] = g[idx[a]][idx[b]];
    if (sgn(determinant(sub)) == 0) return false;
  }
  return true;
}

// Index of the first appended seed on a floor, or the floor size if none.
std::size_t appended_start(const TowerFamily& fam, bool is_D, int k) {
  const auto& floor = is_D ? fam.D[k] : fam.R[k];
  if (k != 1) return floor.size();
  if (is_D && appends_D1(fam.N, fam.q, fam.sign, fam.sigma)) return fam.R[0].size();
  if (!is_D && appends_R1(fam.N, fam.q, fam.sign, fam.sigma)) return fam.D[0].size();
  return floor.size();
}

void check_side(const TowerFamily& fam, bool is_D, CheckReport& rep) {
  const int N = fam.N;
  const int rank = is_D ? fam.q : fam.q + 1;
  const char* name = is_D ? "D" : "R";
  const auto& floors = is_D ? fam.D : fam.R;
  const auto& other = is_D ? fam.R : fam.D;
  // D: rot lifts R, div vanishes.  R: div lifts D, rot vanishes.
  const std::string lifted_op = is_D ? "rot" : "div";
  const std::string free_op = is_D ? "div" : "rot";
  auto apply_lifted = [&](const Form& f) { return is_D ? rot(f) : div(f); };
  auto apply_free = [&](const Form& f) { return is_D ? div(f) : rot(f); };
  const bool lifted_defined = is_D ? rank < N : rank > 0;
  const bool free_defined = is_D ? rank > 0 : rank < N;
  const std::string other_name = is_D ? "R" : "D";

  for (int k = 0; k < static_cast<int>(floors.size()); ++k) {
    const int h = fam.degree(k);
    const std::size_t app = appended_start(fam, is_D, k);
    const int expected = is_D ? expected_D_count(N, fam.q, fam.sign, fam.sigma, k)
                              : expected_R_count(N, fam.q, fam.sign, fam.sigma, k);
    rep.add(std::string(name) + " floor count", family_location(fam, k), static_cast<int>(floors[k].size()) == expected,
            "have " + std::to_string(floors[k].size()) + ", expected " + std::to_string(expected));

    std::vector<Form> seeds;
    if (rank <= N) seeds = seed_basis(N, rank, h).basis;
    const auto seeds_s = restrict_all(seeds);
    const auto floor_s = restrict_all(floors[k]);

    for (std::size_t m = 0; m < floors[k].size(); ++m) {
      const Form& f = floors[k][m];
      const std::string loc = location(fam, k, static_cast<int>(m) + 1);
      rep.add(std::string(name) + " homogeneous of floor degree", loc, homogeneous_of(f, h),
              "degree " + std::to_string(h));
      if (free_defined) {
        const std::string rel = free_op + " " + name + "[k] = 0";
        rep.add(rel, loc, apply_free(f).is_zero(), "residual nonzero");
      }
      if (lifted_defined) {
        if (k == 0 || m >= app || m >= other[k - 1].size()) {
          const std::string rel = k == 0 ? lifted_op + " " + name + "[0] = 0" : lifted_op + " " + name + "[k] = 0";
          rep.add(rel, loc, apply_lifted(f).is_zero(), "residual nonzero");
        } else {
          const std::string rel = lifted_op + " " + name + "[k] = " + other_name + "[k-1]";
          rep.add(rel, loc, apply_lifted(f) == other[k - 1][m], "residual nonzero");
        }
      }
      if (k >= 1 && m < app) {
        bool orth = true;
        for (const auto& s : seeds_s)
          if (sgn(sphere_inner_product(floor_s[m], s)) != 0) orth = false;
        rep.add(std::string(name) + " orthogonal to same-degree seeds", loc, orth, "nonzero sphere pairing");
      }
    }
    // Ground floors and appended chain starts must be the canonical seed basis.
    if (k == 0 || app < floors[k].size()) {
      const std::size_t start = k == 0 ? 0 : app;
      const std::vector<Form> got(floors[k].begin() + static_cast<long>(start), floors[k].end());
      const bool same = rank > N ? got.empty() : got == seeds;
      rep.add(std::string(name) + " chain start equals seed basis", family_location(fam, k), same,
              "stored forms differ from the canonical seeds");
    }
    rep.add(std::string(name) + " floor linearly independent", family_location(fam, k), gram_nonsingular(floor_s),
            "singular Gram matrix");
  }
}

}  // namespace

CheckReport verify_relations(const TowerFamily& fam) {
  require_odd_dimension(fam.N);
  CheckReport rep;
  rep.add("omega_sq = (q+sigma)(N-q+sigma)", family_location(fam, 0),
          fam.omega_sq == Rational((fam.q + fam.sigma) * (fam.N - fam.q + fam.sigma)));
  const bool shape = static_cast<int>(fam.D.size()) == fam.K + 1 && static_cast<int>(fam.R.size()) == fam.K + 1;
  rep.add("floor lists have K+1 entries", family_location(fam, fam.K), shape);
  if (!shape) return rep;
  check_side(fam, true, rep);
  check_side(fam, false, rep);
  return rep;
}

CheckReport verify_low_floor_harmonicity(const TowerFamily& fam) {
  CheckReport rep;
  auto run = [&](const std::vector<std::vector<Form>>& floors, const char* name) {
    for (int k = 0; k < static_cast<int>(floors.size()); ++k)
      for (std::size_t m = 0; m < floors[k].size(); ++m) {
        const bool harmonic = laplacian(floors[k][m]).is_zero();
        const std::string loc = location(fam, k, static_cast<int>(m) + 1);
        if (k <= 1)
          rep.add(std::string("Laplacian of ") + name + " floor <= 1 vanishes", loc, harmonic, "nonzero Laplacian");
        else if (harmonic)
          rep.add(std::string("review: harmonic ") + name + " floor >= 2", loc, true, "Laplacian is zero");
      }
  };
  run(fam.D, "D");
  run(fam.R, "R");
  return rep;
}

CheckReport verify_odd_floor_structure(const TowerFamily& fam) {
  CheckReport rep;
  const int N = fam.N;
  for (int k = 0; k < static_cast<int>(fam.D.size()); ++k)
    for (std::size_t m = 0; m < fam.D[k].size(); ++m) {
      const Form& f = fam.D[k][m];
      const std::string loc = location(fam, k, static_cast<int>(m) + 1);
      const bool tangential = fam.q == 0 || T_op(f).is_zero();
      if (k % 2 == 0) {
        if (tangential) rep.add("review: T D = 0 on even floor", loc, true, "T D vanishes");
        continue;
      }
      rep.add("T D = 0 on odd floor", loc, tangential, "T D nonzero");
      if (fam.q > 0)
        for (int j = 1; j <= 2; ++j)
          rep.add("div(r^" + std::to_string(2 * j) + " D) = 0 on odd floor", loc, div(f.times_r_power(2 * j)).is_zero(),
                  "residual nonzero");
    }
  for (int k = 0; k < static_cast<int>(fam.R.size()); ++k)
    for (std::size_t m = 0; m < fam.R[k].size(); ++m) {
      if (k % 2 == 0) continue;
      const Form& f = fam.R[k][m];
      const std::string loc = location(fam, k, static_cast<int>(m) + 1);
      if (fam.q + 2 <= N) rep.add("R R = 0 on odd floor", loc, R_op(f).is_zero(), "(x.dx) wedge R nonzero");
      if (fam.q + 1 < N)
        for (int j = 1; j <= 2; ++j)
          rep.add("rot(r^" + std::to_string(2 * j) + " R) = 0 on odd floor", loc, rot(f.times_r_power(2 * j)).is_zero(),
                  "residual nonzero");
    }
  return rep;
}

const char* to_string(ExceptionalKind k) {
  switch (k) {
    case ExceptionalKind::D_hat: return "D_hat";
    case ExceptionalKind::R_hat: return "R_hat";
    case ExceptionalKind::D_hat_s: return "D_hat_s";
    case ExceptionalKind::R_hat_s: return "R_hat_s";
    case ExceptionalKind::D_check_s: return "D_check_s";
    case ExceptionalKind::R_check_s: return "R_check_s";
  }
  return "?";
}

ExceptionalFormDescriptor exceptional_form(ExceptionalKind kind, int N, int q, int K, std::optional<Rational> s) {
  require_odd_dimension(N);
  if (K < 1) throw TowerError(ErrorKind::invalid_input, "exceptional forms need K >= 1");
  const bool is_D_kind = kind == ExceptionalKind::D_hat || kind == ExceptionalKind::D_hat_s ||
                         kind == ExceptionalKind::D_check_s;
  if (q < 0 || q > (is_D_kind ? N : N - 1)) throw TowerError(ErrorKind::invalid_input, "rank q out of range");
  const bool weighted = kind != ExceptionalKind::D_hat && kind != ExceptionalKind::R_hat;
  const bool check = kind == ExceptionalKind::D_check_s || kind == ExceptionalKind::R_check_s;
  if (weighted && !s) throw TowerError(ErrorKind::invalid_input, "weighted exceptional form needs s");

  ExceptionalFormDescriptor d;
  d.kind = kind;
  d.N = N;
  d.q = q;
  d.K = K;
  d.s = s;
  auto set = [&](int family_q, bool is_D, int height, int threshold_height) {
    if (weighted) {
      const bool below = *s < make_rational(N - 2 * threshold_height, 2);
      if (below == check) return;
    }
    d.zero = false;
    d.family_q = family_q;
    d.is_D = is_D;
    d.rank = is_D ? family_q : family_q + 1;
    d.height = height;
    d.label = std::string("-") + (is_D ? "D" : "R") + "^{" + std::to_string(d.rank) + "," + std::to_string(height) +
              "}_{0,1}";
  };
  if (is_D_kind) {
    if (q == 0 && K % 2 == 0) set(0, true, K, K);
    else if (q == 1) set(0, false, 1, 1);
    else if (q == N - 1 && K % 2 == 1) set(N - 1, true, K, K);
  } else {
    if (q == 0 && K % 2 == 1) set(0, false, K, K);
    else if (q == N - 2) set(N - 1, true, 1, 1);
    else if (q == N - 1 && K % 2 == 0) set(N - 1, false, K, K);
  }
  if (d.zero) d.label = "0";
  return d;
}

Form exceptional_value(const ExceptionalFormDescriptor& d) {
  if (d.zero) return Form(d.N, (d.kind == ExceptionalKind::D_hat || d.kind == ExceptionalKind::D_hat_s ||
                                d.kind == ExceptionalKind::D_check_s)
                                   ? d.q
                                   : d.q + 1);
  const TowerFamily fam = build_tower_pair(d.N, d.family_q, Sign::minus, 0, d.height);
  const auto& floor = d.is_D ? fam.D[d.height] : fam.R[d.height];
  if (floor.empty()) throw TowerError(ErrorKind::consistency_failure, "exceptional form missing from its family");
  return -floor.front();
}

}  // namespace towercalc
