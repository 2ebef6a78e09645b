#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "towercalc/coords.hpp"
#include "towercalc/forms.hpp"
#include "towercalc/linalg.hpp"
#include "towercalc/parallel.hpp"

namespace towercalc {

/// Closed and coclosed degree-h q-forms inside one parity block.
struct BlockSeeds {
  std::vector<CoordVec> basis;
  DenseMatrix gram;
  int depth = 0;  // largest |alpha| admitted by the final ansatz
  std::vector<CoordVec> duals;  // harmonic_dual of each basis vector when the degree is >= 0
};

/// Fills gram (and duals for polynomial degrees) from the basis.
void finish_block_seeds(int N, int h, BlockSeeds& s);

/// Basis of the closed and coclosed homogeneous q-forms of degree h.
struct SeedSpace {
  int N = 0;
  int q = 0;
  int degree = 0;
  std::vector<Form> basis;
  DenseMatrix gram;
  std::vector<CoordVec> coords;
  std::vector<std::uint32_t> blocks;
  int depth = 0;

  int dimension() const { return static_cast<int>(basis.size()); }
};

/// Memo table for block seeds. Concurrent readers, one writer per insert.
/// When TOWERCALC_CACHE names a directory, results are also stored there and
/// re-validated on load.
class SeedCache {
 public:
  static SeedCache& global();

  std::shared_ptr<const BlockSeeds> block(int N, int q, int h, std::uint32_t block, int depth_hint);
  void clear();
  std::size_t size() const;

 private:
  using Key = std::tuple<int, int, int, std::uint32_t>;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const BlockSeeds>> table_;
};

/// Computes one block directly, bypassing the cache.
BlockSeeds compute_block_seeds(int N, int q, int h, std::uint32_t block, int depth_hint);

/// Seed space; depth_hint below zero means q + 2.
SeedSpace seed_basis(int N, int q, int h, int depth_hint = -1, ExecPolicy policy = ExecPolicy::serial);

/// Dimension of the seed space at degree h.
int seed_dimension(int N, int q, int h, ExecPolicy policy = ExecPolicy::serial);

/// mu_sigma^q: dimension of the degree-sigma seeds, checked against degree
/// -sigma-N. For 1 <= q <= N-1 the two must agree; for q in {0, N} the
/// negative side must be empty.
int mu(int N, int q, int sigma);

/// mu_sigma^q from the dimension of the hook-shaped SO(N) representation
/// (sigma + 1, 1^{q-1}): (2k+N-2)(k+N-2)! / ((k-1)!(q-1)!(N-q-1)!(k+q-1)(k+N-q-1))
/// with k = sigma + 1, and 1 resp. 0 at the extreme ranks.
int mu_closed_form(int N, int q, int sigma);

/// F minus its sphere-orthogonal projection onto the span of the space.
Form orthogonal_complement_projection(const SeedSpace& space, const Form& f);

/// Same in coordinates against one block's basis.
CoordVec project_off(int N, const BlockSeeds& seeds, const CoordVec& v);

/// Gram matrix of coordinate vectors under the sphere pairing.
DenseMatrix coord_gram(int N, const std::vector<CoordVec>& vs);

/// Kernel of (rot, div) on the given ansatz keys of degree h.
std::vector<CoordVec> closed_coclosed_kernel(int N, int q, int h, const std::vector<CoordKey>& keys);

}  // namespace towercalc
