#pragma once

#include <map>
#include <memory>
#include <tuple>

#include "towercalc/towers.hpp"

namespace towercalc {

/// Lazily built tower families of one dimension. A family is rebuilt when a
/// higher floor is requested. Not thread-safe.
class TowerStore {
 public:
  explicit TowerStore(int N, ExecPolicy policy = ExecPolicy::serial);

  int dimension() const { return n_; }

  /// Family with D rank q and at least K floors above the ground floor;
  /// null when mu_sigma^q + mu_sigma^{q+1} = 0.
  std::shared_ptr<const TowerFamily> family(int q, Sign sign, int sigma, int K);

  /// Number of D forms of rank q (resp. R forms of rank q) carrying index
  /// (sign, k, sigma, *).
  int d_count(int q, Sign sign, int k, int sigma);
  int r_count(int q, Sign sign, int k, int sigma);

  /// D_I^q, from the family with D rank q. Throws not-in-span for an index
  /// beyond the floor's multiplicity.
  Form D(int q, const TowerIndex& I);
  /// R_J^q, from the family with D rank q - 1.
  Form R(int q, const TowerIndex& J);

 private:
  int n_;
  ExecPolicy policy_;
  std::map<std::tuple<int, Sign, int>, std::shared_ptr<const TowerFamily>> cache_;
};

}  // namespace towercalc
