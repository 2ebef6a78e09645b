#include "towercalc/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "towercalc/error.hpp"

namespace towercalc {

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (int i = 0; i < kMaxDim; ++i) m.exp[i] = static_cast<std::uint8_t>(a.exp[i] + b.exp[i]);
  return m;
}

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  return monomial(nvars, Monomial{}, c);
}

Polynomial Polynomial::variable(int nvars, int i) {
  Monomial m;
  m.exp[i] = 1;
  return monomial(nvars, m, 1);
}

Polynomial Polynomial::monomial(int nvars, const Monomial& m, const Rational& c) {
  Polynomial p(nvars);
  if (sgn(c) != 0) p.terms_.emplace_back(m, c);
  return p;
}

Polynomial Polynomial::radial_square(int nvars) {
  std::vector<Term> terms;
  for (int i = 0; i < nvars; ++i) {
    Monomial m;
    m.exp[i] = 2;
    terms.emplace_back(m, Rational(1));
  }
  return from_terms(nvars, std::move(terms));
}

Polynomial Polynomial::from_terms(int nvars, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return GrlexLess{}(a.first, b.first); });
  Polynomial p(nvars);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (sgn(p.terms_.back().second) == 0) p.terms_.pop_back();
    } else if (sgn(t.second) != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

namespace {

// Merge of two sorted term lists with a scale on the second.
std::vector<Polynomial::Term> merge(const std::vector<Polynomial::Term>& a,
                                    const std::vector<Polynomial::Term>& b, int sign) {
  std::vector<Polynomial::Term> out;
  out.reserve(a.size() + b.size());
  GrlexLess less;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && less(a[i].first, b[j].first))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || less(b[j].first, a[i].first)) {
      out.emplace_back(b[j].first, sign > 0 ? b[j].second : Rational(-b[j].second));
      ++j;
    } else {
      Rational c = sign > 0 ? Rational(a[i].second + b[j].second)
                            : Rational(a[i].second - b[j].second);
      if (sgn(c) != 0) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (n_ == 0) n_ = other.n_;
  terms_ = merge(terms_, other.terms_, +1);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (n_ == 0) n_ = other.n_;
  terms_ = merge(terms_, other.terms_, -1);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.second = -t.second;
  return p;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  PolynomialBuilder acc(std::max(a.n_, b.n_));
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) acc.add(ma * mb, ca * cb);
  return acc.build();
}

Polynomial Polynomial::times(const Monomial& m, const Rational& c) const {
  Polynomial p(n_);
  if (sgn(c) == 0) return p;
  p.terms_.reserve(terms_.size());
  // Multiplying by a monomial preserves grlex order.
  for (const auto& [mt, ct] : terms_) p.terms_.emplace_back(mt * m, ct * c);
  return p;
}

Polynomial Polynomial::times_variable(int i) const {
  Monomial m;
  m.exp[i] = 1;
  return times(m, 1);
}

Polynomial Polynomial::partial(int i) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    if (m.exp[i] == 0) continue;
    Monomial d = m;
    --d.exp[i];
    out.emplace_back(d, c * m.exp[i]);
  }
  return from_terms(n_, std::move(out));
}

Polynomial Polynomial::times_radial_square(int power) const {
  Polynomial p = *this;
  const Polynomial s = radial_square(n_);
  for (int k = 0; k < power; ++k) p = p * s;
  return p;
}

void Polynomial::divide_by_radial_square(Polynomial& quotient, Polynomial& remainder) const {
  // Division by x_1^2 + s' with s' = x_2^2 + ... + x_N^2 under an order where
  // x_1^2 leads: replace x_1^2 x^b by -s' x^b until every x_1 exponent is <= 1.
  std::map<Monomial, Rational, GrlexLess> work;
  for (const auto& [m, c] : terms_) work.emplace(m, c);
  PolynomialBuilder q(n_);
  int top = 0;
  for (const auto& [m, c] : terms_) top = std::max<int>(top, m.exp[0]);
  for (int e = top; e >= 2; --e) {
    std::vector<std::pair<Monomial, Rational>> layer;
    for (const auto& [m, c] : work)
      if (m.exp[0] == e) layer.emplace_back(m, c);
    for (auto& [m, c] : layer) {
      work.erase(m);
      Monomial base = m;
      base.exp[0] = static_cast<std::uint8_t>(e - 2);
      q.add(base, c);
      for (int j = 1; j < n_; ++j) {
        Monomial t = base;
        t.exp[j] = static_cast<std::uint8_t>(t.exp[j] + 2);
        auto it = work.find(t);
        if (it == work.end()) {
          work.emplace(t, -c);
        } else {
          it->second -= c;
          if (sgn(it->second) == 0) work.erase(it);
        }
      }
    }
  }
  quotient = q.build();
  std::vector<Term> rem(work.begin(), work.end());
  remainder = from_terms(n_, std::move(rem));
}

bool Polynomial::divisible_by_radial_square() const {
  if (terms_.empty()) return true;
  Polynomial q, rem;
  divide_by_radial_square(q, rem);
  return rem.is_zero();
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& x) { return GrlexLess{}(t.first, x); });
  if (it != terms_.end() && it->first == m) return it->second;
  return 0;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational a = abs(c);
    os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    first = false;
    bool unit = a == 1 && m.degree() > 0;
    if (!unit) os << towercalc::to_string(a);
    bool need_star = !unit;
    for (int i = 0; i < n_; ++i) {
      if (m.exp[i] == 0) continue;
      if (need_star) os << "*";
      need_star = true;
      os << "x" << (i + 1);
      if (m.exp[i] > 1) os << "^" << int(m.exp[i]);
    }
  }
  return os.str();
}

void PolynomialBuilder::add(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = acc_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) acc_.erase(it);
  }
}

void PolynomialBuilder::add(const Polynomial& p, const Rational& scale) {
  for (const auto& [m, c] : p.terms()) add(m, c * scale);
}

Polynomial PolynomialBuilder::build() {
  std::vector<Polynomial::Term> terms(acc_.begin(), acc_.end());
  acc_.clear();
  return Polynomial::from_terms(n_, std::move(terms));
}

namespace {

Rational compute_sphere_moment(int nvars, const Monomial& alpha) {
  BigInt num = 1;
  BigInt den = 1;
  int half_total = 0;
  for (int i = 0; i < nvars; ++i) {
    if (alpha.exp[i] & 1u) return 0;
    int b = alpha.exp[i] / 2;
    for (int j = 1; j <= b; ++j) num *= 2 * j - 1;
    half_total += b;
  }
  for (int j = 0; j < half_total; ++j) den *= nvars + 2 * j;
  return make_rational(num, den);
}

}  // namespace

Rational sphere_moment(int nvars, const Monomial& alpha) {
  // Per-thread memo keyed by the packed exponents; large exponents bypass it.
  std::uint64_t key = static_cast<std::uint64_t>(nvars);
  for (int i = 0; i < kMaxDim; ++i) {
    if (alpha.exp[i] >= 64) return compute_sphere_moment(nvars, alpha);
    key = (key << 6) | alpha.exp[i];
  }
  thread_local std::unordered_map<std::uint64_t, Rational> memo;
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  Rational v = compute_sphere_moment(nvars, alpha);
  if (memo.size() < (1u << 20)) memo.emplace(key, v);
  return v;
}

Rational sphere_average(const Polynomial& p) {
  Rational s = 0;
  for (const auto& [m, c] : p.terms()) s += c * sphere_moment(p.nvars(), m);
  return s;
}

Rational sphere_average_product(const Polynomial& p, const Polynomial& q) {
  Rational s = 0;
  if (p.is_zero() || q.is_zero()) return s;
  const int n = std::max(p.nvars(), q.nvars());
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> by_parity;
  for (std::size_t j = 0; j < q.terms().size(); ++j) by_parity[q.terms()[j].first.parity_mask()].push_back(j);
  Rational inner;
  for (const auto& [ma, ca] : p.terms()) {
    auto it = by_parity.find(ma.parity_mask());
    if (it == by_parity.end()) continue;
    inner = 0;
    for (std::size_t j : it->second) {
      const auto& [mb, cb] = q.terms()[j];
      inner += cb * sphere_moment(n, ma * mb);
    }
    s += ca * inner;
  }
  return s;
}

namespace {

void enumerate(int nvars, int pos, int remaining, Monomial& cur, std::vector<Monomial>& out) {
  if (pos == nvars - 1) {
    cur.exp[pos] = static_cast<std::uint8_t>(remaining);
    out.push_back(cur);
    cur.exp[pos] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur.exp[pos] = static_cast<std::uint8_t>(e);
    enumerate(nvars, pos + 1, remaining - e, cur, out);
  }
  cur.exp[pos] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
  if (nvars < 1 || nvars > kMaxDim)
    throw TowerError(ErrorKind::invalid_input, "unsupported number of variables");
  std::vector<Monomial> out;
  if (degree < 0) return out;
  Monomial cur;
  enumerate(nvars, 0, degree, cur, out);
  std::sort(out.begin(), out.end(), GrlexLess{});
  return out;
}

}  // namespace towercalc
