#include "towercalc/harmonic_spaces.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "towercalc/error.hpp"

namespace towercalc {

namespace {

std::vector<CoordVec> to_coord_vectors(const std::vector<SparseRow>& rows, const std::vector<CoordKey>& keys) {
  std::vector<CoordVec> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    CoordVec v;
    v.reserve(r.size());
    for (const auto& [c, x] : r) v.emplace_back(keys[c], x);
    out.push_back(std::move(v));
  }
  return out;
}

bool closed_and_coclosed(int N, int q, int h, const CoordVec& v) {
  CoordVec r, d;
  for (const auto& [k, c] : v) {
    if (q < N)
      for (auto& [k2, c2] : rot_of_key(N, h, k)) r.emplace_back(k2, c * c2);
    if (q > 0)
      for (auto& [k2, c2] : div_of_key(N, h, k)) d.emplace_back(k2, c * c2);
  }
  sort_coords(r);
  sort_coords(d);
  return r.empty() && d.empty();
}

std::filesystem::path cache_file(const std::string& dir, int N, int q, int h, std::uint32_t block) {
  return std::filesystem::path(dir) / ("seeds_N" + std::to_string(N) + "_q" + std::to_string(q) + "_h" +
                                       std::to_string(h) + "_b" + std::to_string(block) + ".json");
}

nlohmann::json seeds_to_json(int N, const BlockSeeds& s) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& v : s.basis) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, c] : v)
      terms.push_back({{"mask", k.mask},
                       {"alpha", std::vector<int>(k.alpha.exp.begin(), k.alpha.exp.begin() + N)},
                       {"coef", to_string(c)}});
    basis.push_back(terms);
  }
  return {{"schema", "towercalc/1"}, {"depth", s.depth}, {"basis", basis}};
}

bool seeds_from_json(int N, int q, int h, std::uint32_t block, const nlohmann::json& j, BlockSeeds& out) {
  if (j.value("schema", "") != "towercalc/1") return false;
  out.depth = j.at("depth").get<int>();
  for (const auto& vj : j.at("basis")) {
    CoordVec v;
    for (const auto& t : vj) {
      CoordKey k;
      k.mask = t.at("mask").get<IndexMask>();
      const auto alpha = t.at("alpha").get<std::vector<int>>();
      if (static_cast<int>(alpha.size()) != N) return false;
      for (int i = 0; i < N; ++i) k.alpha.exp[i] = static_cast<std::uint8_t>(alpha[i]);
      if (popcount(k.mask) != q || k.alpha.exp[0] > 1 || block_of(k) != block) return false;
      v.emplace_back(k, parse_rational(t.at("coef").get<std::string>()));
    }
    sort_coords(v);
    if (!closed_and_coclosed(N, q, h, v)) return false;
    out.basis.push_back(std::move(v));
  }
  finish_block_seeds(N, h, out);
  return out.basis.empty() || sgn(determinant(out.gram)) != 0;
}

}  // namespace

std::vector<CoordVec> closed_coclosed_kernel(int N, int q, int h, const std::vector<CoordKey>& keys) {
  std::map<CoordKey, int, CoordKeyLess> row_of;
  std::vector<SparseRow> rows;
  auto put = [&](const CoordKey& k, int col, const Rational& c) {
    auto [it, inserted] = row_of.emplace(k, static_cast<int>(rows.size()));
    if (inserted) rows.emplace_back();
    rows[it->second].emplace_back(col, c);
  };
  for (int j = 0; j < static_cast<int>(keys.size()); ++j) {
    if (q < N)
      for (const auto& [k, c] : rot_of_key(N, h, keys[j])) put(k, j, c);
    if (q > 0)
      for (const auto& [k, c] : div_of_key(N, h, keys[j])) put(k, j, c);
  }
  return to_coord_vectors(kernel_basis(rows, static_cast<int>(keys.size())), keys);
}

DenseMatrix coord_gram(int N, const std::vector<CoordVec>& vs) {
  DenseMatrix g(vs.size(), std::vector<Rational>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i; j < vs.size(); ++j) {
      g[i][j] = coord_inner(N, vs[i], vs[j]);
      g[j][i] = g[i][j];
    }
  return g;
}

void finish_block_seeds(int N, int h, BlockSeeds& s) {
  if (h < 0) {
    s.duals.clear();
    s.gram = coord_gram(N, s.basis);
    return;
  }
  s.duals.clear();
  for (const auto& v : s.basis) s.duals.push_back(harmonic_dual(N, h, v));
  const Rational scale = fischer_scale(N, h);
  const std::size_t n = s.basis.size();
  s.gram.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s.gram[i][j] = s.gram[j][i] = scale * top_pairing(s.basis[i], s.duals[j]);
}

BlockSeeds compute_block_seeds(int N, int q, int h, std::uint32_t block, int depth_hint) {
  require_odd_dimension(N);
  if (q < 0 || q > N) throw TowerError(ErrorKind::invalid_input, "rank out of range");
  BlockSeeds out;
  if (h >= 0) {
    out.depth = h;
    out.basis = closed_coclosed_kernel(N, q, h, ansatz_keys(N, q, h, block, h, true));
  } else {
    const int sigma = -h - N;
    int depth = depth_hint < 0 ? q + 2 : depth_hint;
    if (sigma >= 0) depth = std::max(depth, sigma + 2);
    const int cap = -h + q + 8;
    auto prev = closed_coclosed_kernel(N, q, h, ansatz_keys(N, q, h, block, depth, false));
    while (true) {
      if (depth + 2 > cap)
        throw TowerError(ErrorKind::construction_failure,
                         "seed dimension did not stabilize below depth " + std::to_string(cap) + " (N=" +
                             std::to_string(N) + ", q=" + std::to_string(q) + ", h=" + std::to_string(h) + ")");
      auto next = closed_coclosed_kernel(N, q, h, ansatz_keys(N, q, h, block, depth + 2, false));
      if (next.size() == prev.size()) break;
      prev = std::move(next);
      depth += 2;
    }
    out.depth = depth;
    out.basis = std::move(prev);
  }
  finish_block_seeds(N, h, out);
  return out;
}

SeedCache& SeedCache::global() {
  static SeedCache cache;
  return cache;
}

std::shared_ptr<const BlockSeeds> SeedCache::block(int N, int q, int h, std::uint32_t block, int depth_hint) {
  const Key key{N, q, h, block};
  {
    std::shared_lock lock(mutex_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
  }
  std::shared_ptr<BlockSeeds> value;
  const char* dir = std::getenv("TOWERCALC_CACHE");
  if (dir && *dir) {
    std::ifstream in(cache_file(dir, N, q, h, block));
    if (in) {
      try {
        auto candidate = std::make_shared<BlockSeeds>();
        if (seeds_from_json(N, q, h, block, nlohmann::json::parse(in), *candidate)) value = candidate;
      } catch (const std::exception&) {
        value.reset();
      }
    }
  }
  if (!value) {
    value = std::make_shared<BlockSeeds>(compute_block_seeds(N, q, h, block, depth_hint));
    if (dir && *dir) {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      const auto path = cache_file(dir, N, q, h, block);
      const auto tmp = path.string() + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(value.get()));
      std::ofstream(tmp) << seeds_to_json(N, *value).dump();
      std::filesystem::rename(tmp, path, ec);
    }
  }
  std::unique_lock lock(mutex_);
  auto [it, inserted] = table_.emplace(key, value);
  return it->second;
}

void SeedCache::clear() {
  std::unique_lock lock(mutex_);
  table_.clear();
}

std::size_t SeedCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

SeedSpace seed_basis(int N, int q, int h, int depth_hint, ExecPolicy policy) {
  require_odd_dimension(N);
  if (q < 0 || q > N) throw TowerError(ErrorKind::invalid_input, "rank out of range");
  const int nblocks = 1 << N;
  std::vector<std::shared_ptr<const BlockSeeds>> parts(nblocks);
  for_each_index(policy, nblocks, [&](int b) {
    parts[b] = SeedCache::global().block(N, q, h, static_cast<std::uint32_t>(b), depth_hint);
  });
  SeedSpace s;
  s.N = N;
  s.q = q;
  s.degree = h;
  for (int b = 0; b < nblocks; ++b) {
    s.depth = std::max(s.depth, parts[b]->depth);
    for (const auto& v : parts[b]->basis) {
      s.coords.push_back(v);
      s.blocks.push_back(static_cast<std::uint32_t>(b));
      s.basis.push_back(coords_to_form(N, q, h, v));
    }
  }
  const std::size_t n = s.basis.size();
  s.gram.assign(n, std::vector<Rational>(n));
  std::size_t offset = 0;
  for (int b = 0; b < nblocks; ++b) {
    const auto& g = parts[b]->gram;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) s.gram[offset + i][offset + j] = g[i][j];
    offset += g.size();
  }
  return s;
}

int seed_dimension(int N, int q, int h, ExecPolicy policy) {
  require_odd_dimension(N);
  const int nblocks = 1 << N;
  std::vector<int> dims(nblocks);
  for_each_index(policy, nblocks, [&](int b) {
    dims[b] = static_cast<int>(SeedCache::global().block(N, q, h, static_cast<std::uint32_t>(b), -1)->basis.size());
  });
  int total = 0;
  for (int d : dims) total += d;
  return total;
}

int mu(int N, int q, int sigma) {
  if (sigma < 0) throw TowerError(ErrorKind::invalid_input, "mu needs sigma >= 0");
  const int plus = seed_dimension(N, q, sigma);
  const int minus = seed_dimension(N, q, -sigma - N);
  const bool extreme = q == 0 || q == N;
  if (extreme ? minus != 0 : minus != plus)
    throw TowerError(ErrorKind::consistency_failure,
                     "seed dimensions disagree: degree " + std::to_string(sigma) + " has " + std::to_string(plus) +
                         ", degree " + std::to_string(-sigma - N) + " has " + std::to_string(minus) + " (N=" +
                         std::to_string(N) + ", q=" + std::to_string(q) + ")");
  return plus;
}

int mu_closed_form(int N, int q, int sigma) {
  if (sigma < 0) throw TowerError(ErrorKind::invalid_input, "mu needs sigma >= 0");
  if (q < 0 || q > N) throw TowerError(ErrorKind::invalid_input, "rank q out of range");
  if (q == 0 || q == N) return sigma == 0 ? 1 : 0;
  auto fact = [](long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
  };
  const long k = sigma + 1;
  const BigInt num = BigInt(2 * k + N - 2) * fact(k + N - 2);
  const BigInt den = fact(k - 1) * fact(q - 1) * fact(N - q - 1) * BigInt(k + q - 1) * BigInt(k + N - q - 1);
  return static_cast<int>(BigInt(num / den).get_si());
}

CoordVec project_off(int N, const BlockSeeds& seeds, const CoordVec& v) {
  if (seeds.basis.empty() || v.empty()) return v;
  DenseMatrix rhs(seeds.basis.size(), std::vector<Rational>(1));
  bool any = false;
  for (std::size_t i = 0; i < seeds.basis.size(); ++i) {
    rhs[i][0] = coord_inner(N, seeds.basis[i], v);
    any = any || sgn(rhs[i][0]) != 0;
  }
  if (!any) return v;
  DenseMatrix c;
  if (!solve_square(seeds.gram, rhs, c))
    throw TowerError(ErrorKind::consistency_failure, "singular seed Gram matrix");
  CoordVec out = v;
  for (std::size_t i = 0; i < seeds.basis.size(); ++i)
    for (const auto& [k, x] : seeds.basis[i]) out.emplace_back(k, -c[i][0] * x);
  sort_coords(out);
  return out;
}

Form orthogonal_complement_projection(const SeedSpace& space, const Form& f) {
  if (f.grade() != space.q || f.dimension() != space.N)
    throw TowerError(ErrorKind::invalid_input, "projection: form does not match the seed space");
  CoordVec v = form_to_coords(f, space.degree);
  std::map<std::uint32_t, BlockSeeds> by_block;
  for (std::size_t i = 0; i < space.coords.size(); ++i) by_block[space.blocks[i]].basis.push_back(space.coords[i]);
  for (auto& [b, seeds] : by_block) seeds.gram = coord_gram(space.N, seeds.basis);
  for (const auto& [b, seeds] : by_block) v = project_off(space.N, seeds, v);
  return coords_to_form(space.N, space.q, space.degree, v);
}

}  // namespace towercalc
