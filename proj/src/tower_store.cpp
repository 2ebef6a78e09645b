#include "towercalc/tower_store.hpp"

#include "towercalc/error.hpp"

namespace towercalc {

TowerStore::TowerStore(int N, ExecPolicy policy) : n_(N), policy_(policy) { require_odd_dimension(N); }

std::shared_ptr<const TowerFamily> TowerStore::family(int q, Sign sign, int sigma, int K) {
  if (q < 0 || q > n_ || sigma < 0 || K < 0) return nullptr;
  if (mu_or_zero(n_, q, sigma) + mu_or_zero(n_, q + 1, sigma) == 0) return nullptr;
  auto& slot = cache_[{q, sign, sigma}];
  if (!slot || slot->K < K) slot = std::make_shared<const TowerFamily>(build_tower_pair(n_, q, sign, sigma, K, policy_));
  return slot;
}

int TowerStore::d_count(int q, Sign sign, int k, int sigma) {
  if (q < 0 || q > n_ || k < 0 || sigma < 0) return 0;
  return expected_D_count(n_, q, sign, sigma, k);
}

int TowerStore::r_count(int q, Sign sign, int k, int sigma) {
  if (q < 1 || q > n_ || k < 0 || sigma < 0) return 0;
  return expected_R_count(n_, q - 1, sign, sigma, k);
}

namespace {

[[noreturn]] void missing(const char* what, int q, const TowerIndex& I) {
  throw TowerError(ErrorKind::not_in_span,
                   std::string("no tower form ") + what + "^" + std::to_string(q) + "_" + to_string(I));
}

}  // namespace

Form TowerStore::D(int q, const TowerIndex& I) {
  if (I.m < 1 || I.m > d_count(q, I.sign, I.k, I.sigma)) missing("D", q, I);
  auto fam = family(q, I.sign, I.sigma, I.k);
  if (!fam) missing("D", q, I);
  return fam->D[I.k][I.m - 1];
}

Form TowerStore::R(int q, const TowerIndex& J) {
  if (J.m < 1 || J.m > r_count(q, J.sign, J.k, J.sigma)) missing("R", q, J);
  auto fam = family(q - 1, J.sign, J.sigma, J.k);
  if (!fam) missing("R", q, J);
  return fam->R[J.k][J.m - 1];
}

}  // namespace towercalc
