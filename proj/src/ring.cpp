#include "towercalc/ring.hpp"

#include <algorithm>
#include <sstream>

#include "towercalc/error.hpp"

namespace towercalc {

namespace {

int parity(int b) { return ((b % 2) + 2) % 2; }

Polynomial times_square_power(const Polynomial& p, int power) {
  return power == 0 ? p : p.times_radial_square(power);
}

}  // namespace

HomogeneousPart canonicalize(int b, const Polynomial& poly) {
  HomogeneousPart part;
  part.r_exp = b;
  part.poly = poly;
  if (poly.is_zero()) {
    part.degree = b;
    return part;
  }
  if (!poly.is_homogeneous())
    throw TowerError(ErrorKind::invalid_input, "canonicalize: polynomial is not homogeneous");
  part.degree = b + poly.degree();
  while (part.poly.degree() >= 2) {
    Polynomial q, rem;
    part.poly.divide_by_radial_square(q, rem);
    if (!rem.is_zero()) break;
    part.poly = std::move(q);
    part.r_exp += 2;
  }
  return part;
}

std::vector<ReducedTerm> reduced_terms(const HomogeneousPart& part) {
  PolynomialBuilder acc(part.poly.nvars());
  Polynomial p = part.poly;
  while (!p.is_zero()) {
    Polynomial q, rem;
    p.divide_by_radial_square(q, rem);
    acc.add(rem);
    p = std::move(q);
  }
  const Polynomial all = acc.build();
  return {all.terms().begin(), all.terms().end()};
}

RadialRingElement RadialRingElement::from_part(int nvars, int b, const Polynomial& poly) {
  RadialRingElement e(nvars);
  e.add_part(canonicalize(b, poly), 1);
  return e;
}

RadialRingElement RadialRingElement::constant(int nvars, const Rational& c) {
  return from_part(nvars, 0, Polynomial::constant(nvars, c));
}

RadialRingElement RadialRingElement::coordinate(int nvars, int i) {
  return from_part(nvars, 0, Polynomial::variable(nvars, i));
}

RadialRingElement RadialRingElement::radius_power(int nvars, int b) {
  return from_part(nvars, b, Polynomial::constant(nvars, 1));
}

RadialRingElement RadialRingElement::from_polynomial(const Polynomial& p) {
  RadialRingElement e(p.nvars());
  std::map<int, std::vector<Polynomial::Term>> by_degree;
  for (const auto& t : p.terms()) by_degree[t.first.degree()].push_back(t);
  for (auto& [d, terms] : by_degree)
    e.add_part(canonicalize(0, Polynomial::from_terms(p.nvars(), std::move(terms))), 1);
  return e;
}

RadialRingElement RadialRingElement::from_reduced(int nvars, int degree,
                                                  const std::vector<ReducedTerm>& terms) {
  RadialRingElement e(nvars);
  for (int par = 0; par < 2; ++par) {
    int top = -1;
    for (const auto& [a, c] : terms)
      if (parity(a.degree()) == par) top = std::max(top, a.degree());
    if (top < 0) continue;
    // Every term becomes r^{degree - top} x^alpha (sum x^2)^{(top - |alpha|)/2}.
    PolynomialBuilder acc(nvars);
    for (const auto& [a, c] : terms) {
      if (parity(a.degree()) != par) continue;
      acc.add(times_square_power(Polynomial::monomial(nvars, a, c), (top - a.degree()) / 2));
    }
    e.add_part(canonicalize(degree - top, acc.build()), 1);
  }
  return e;
}

std::vector<int> RadialRingElement::degrees() const {
  std::vector<int> out;
  for (const auto& [k, p] : parts_)
    if (out.empty() || out.back() != k.first) out.push_back(k.first);
  return out;
}

RadialRingElement RadialRingElement::homogeneous_component(int d) const {
  RadialRingElement e(n_);
  for (const auto& [k, p] : parts_)
    if (k.first == d) e.parts_.emplace(k, p);
  return e;
}

void RadialRingElement::add_part(const HomogeneousPart& part, const Rational& scale) {
  if (part.poly.is_zero() || sgn(scale) == 0) return;
  if (n_ == 0) n_ = part.poly.nvars();
  const Key key{part.degree, parity(part.r_exp)};
  auto it = parts_.find(key);
  if (it == parts_.end()) {
    HomogeneousPart p = part;
    p.poly *= scale;
    parts_.emplace(key, std::move(p));
    return;
  }
  const HomogeneousPart& cur = it->second;
  const int bmin = std::min(cur.r_exp, part.r_exp);
  Polynomial sum = times_square_power(cur.poly, (cur.r_exp - bmin) / 2);
  sum += times_square_power(part.poly, (part.r_exp - bmin) / 2) * scale;
  HomogeneousPart merged = canonicalize(bmin, sum);
  if (merged.poly.is_zero())
    parts_.erase(it);
  else
    it->second = std::move(merged);
}

RadialRingElement& RadialRingElement::operator+=(const RadialRingElement& other) {
  for (const auto& [k, p] : other.parts_) add_part(p, 1);
  return *this;
}

RadialRingElement& RadialRingElement::operator-=(const RadialRingElement& other) {
  for (const auto& [k, p] : other.parts_) add_part(p, -1);
  return *this;
}

RadialRingElement& RadialRingElement::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    parts_.clear();
    return *this;
  }
  for (auto& [k, p] : parts_) p.poly *= c;
  return *this;
}

RadialRingElement RadialRingElement::operator-() const {
  RadialRingElement e = *this;
  e *= Rational(-1);
  return e;
}

RadialRingElement operator*(const RadialRingElement& a, const RadialRingElement& b) {
  RadialRingElement e(std::max(a.n_, b.n_));
  for (const auto& [ka, pa] : a.parts_)
    for (const auto& [kb, pb] : b.parts_) e.add_part(canonicalize(pa.r_exp + pb.r_exp, pa.poly * pb.poly), 1);
  return e;
}

RadialRingElement RadialRingElement::times_r_power(int b) const {
  RadialRingElement e(n_);
  for (const auto& [k, p] : parts_) {
    HomogeneousPart q = p;
    q.r_exp += b;
    q.degree += b;
    e.parts_.emplace(RadialRingElement::Key{q.degree, parity(q.r_exp)}, std::move(q));
  }
  return e;
}

RadialRingElement RadialRingElement::times_coordinate(int i) const {
  RadialRingElement e(n_);
  for (const auto& [k, p] : parts_) e.add_part(canonicalize(p.r_exp, p.poly.times_variable(i)), 1);
  return e;
}

RadialRingElement RadialRingElement::partial(int i) const {
  RadialRingElement e(n_);
  for (const auto& [k, p] : parts_) {
    if (p.r_exp == 0) {
      e.add_part(canonicalize(0, p.poly.partial(i)), 1);
      continue;
    }
    // d(r^b P) = r^{b-2} (b x_i P + (sum x^2) dP)
    Polynomial body = p.poly.times_variable(i) * Rational(p.r_exp);
    body += p.poly.partial(i).times_radial_square(1);
    e.add_part(canonicalize(p.r_exp - 2, body), 1);
  }
  return e;
}

Polynomial RadialRingElement::restrict_to_sphere() const {
  PolynomialBuilder acc(n_);
  for (const auto& [k, p] : parts_) acc.add(p.poly);
  return acc.build();
}

std::string RadialRingElement::to_string() const {
  if (parts_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, p] : parts_) {
    if (!first) os << " + ";
    first = false;
    if (p.r_exp != 0) os << "r^" << p.r_exp << "*";
    os << "(" << p.poly.to_string() << ")";
  }
  return os.str();
}

nlohmann::json to_json(const RadialRingElement& e) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& [k, p] : e.parts()) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : p.poly.terms()) {
      std::vector<int> alpha(m.exp.begin(), m.exp.begin() + e.nvars());
      terms.push_back({{"alpha", alpha}, {"coef", to_string(c)}});
    }
    parts.push_back({{"degree", p.degree}, {"r_exp", p.r_exp}, {"terms", terms}});
  }
  return parts;
}

RadialRingElement ring_from_json(int nvars, const nlohmann::json& j) {
  if (!j.is_array()) throw TowerError(ErrorKind::parse_error, "ring element must be an array of parts");
  RadialRingElement e(nvars);
  for (const auto& part : j) {
    if (!part.is_object() || !part.contains("r_exp") || !part.contains("terms"))
      throw TowerError(ErrorKind::parse_error, "ring part needs r_exp and terms");
    const int b = part.at("r_exp").get<int>();
    std::vector<Polynomial::Term> terms;
    for (const auto& t : part.at("terms")) {
      const auto alpha = t.at("alpha").get<std::vector<int>>();
      if (static_cast<int>(alpha.size()) != nvars)
        throw TowerError(ErrorKind::parse_error, "exponent vector length differs from N");
      Monomial m;
      for (int i = 0; i < nvars; ++i) {
        if (alpha[i] < 0 || alpha[i] > 255) throw TowerError(ErrorKind::parse_error, "exponent out of range");
        m.exp[i] = static_cast<std::uint8_t>(alpha[i]);
      }
      terms.emplace_back(m, parse_rational(t.at("coef").get<std::string>()));
    }
    Polynomial poly = Polynomial::from_terms(nvars, std::move(terms));
    if (!poly.is_zero() && !poly.is_homogeneous())
      throw TowerError(ErrorKind::parse_error, "ring part polynomial is not homogeneous");
    if (part.contains("degree") && !poly.is_zero() && part.at("degree").get<int>() != b + poly.degree())
      throw TowerError(ErrorKind::parse_error, "ring part degree disagrees with r_exp and terms");
    e += RadialRingElement::from_part(nvars, b, poly);
  }
  return e;
}

}  // namespace towercalc
