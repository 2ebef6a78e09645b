#include "towercalc/forms.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "towercalc/error.hpp"

namespace towercalc {

int popcount(IndexMask m) { return std::popcount(m); }

std::vector<int> mask_to_indices(IndexMask m) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (m & (1u << i)) out.push_back(i + 1);
  return out;
}

IndexMask indices_to_mask(const std::vector<int>& one_based) {
  IndexMask m = 0;
  for (int i : one_based) m |= 1u << (i - 1);
  return m;
}

std::string mask_to_string(IndexMask m) {
  std::string s;
  for (int i : mask_to_indices(m)) {
    if (!s.empty()) s += ",";
    s += std::to_string(i);
  }
  return s;
}

IndexMask mask_from_string(const std::string& s, int N) {
  IndexMask m = 0;
  int last = 0;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int i = 0;
    try {
      i = std::stoi(item);
    } catch (const std::exception&) {
      throw TowerError(ErrorKind::parse_error, "bad index tuple '" + s + "'");
    }
    if (i <= last || i > N) throw TowerError(ErrorKind::parse_error, "index tuple must be strictly increasing within 1..N: '" + s + "'");
    last = i;
    m |= 1u << (i - 1);
  }
  return m;
}

std::vector<IndexMask> masks_of_grade(int N, int q) {
  std::vector<IndexMask> out;
  if (q < 0 || q > N) return out;
  std::vector<int> idx(q);
  for (int i = 0; i < q; ++i) idx[i] = i;
  while (true) {
    IndexMask m = 0;
    for (int i : idx) m |= 1u << i;
    out.push_back(m);
    int pos = q - 1;
    while (pos >= 0 && idx[pos] == N - q + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

void require_odd_dimension(int N) {
  if (N % 2 == 0) throw TowerError(ErrorKind::unsupported_dimension, "even dimension unsupported (N=" + std::to_string(N) + ")");
  if (N < 3 || N > kMaxDim)
    throw TowerError(ErrorKind::unsupported_dimension, "dimension N=" + std::to_string(N) + " outside 3.." + std::to_string(kMaxDim));
}

namespace {

// Sign of dx^i ^ dx^I moved into increasing position.
int insert_sign(IndexMask I, int i) { return (std::popcount(I & ((1u << i) - 1)) & 1) ? -1 : 1; }

void check_same(const Form& a, const Form& b) {
  if (a.dimension() != b.dimension())
    throw TowerError(ErrorKind::dimension_mismatch, "forms live in different dimensions");
}

}  // namespace

Form::Form(int N, int q) : n_(N), q_(q) {
  if (N < 1 || N > kMaxDim) throw TowerError(ErrorKind::invalid_input, "dimension out of range");
  if (q < 0 || q > N) throw TowerError(ErrorKind::invalid_input, "grade out of range");
}

Form Form::basis(int N, IndexMask mask, const RadialRingElement& coef) {
  Form f(N, popcount(mask));
  f.add_component(mask, coef);
  return f;
}

RadialRingElement Form::component(IndexMask mask) const {
  auto it = comps_.find(mask);
  return it == comps_.end() ? RadialRingElement(n_) : it->second;
}

void Form::add_component(IndexMask mask, const RadialRingElement& coef) {
  if (popcount(mask) != q_ || (mask >> n_) != 0)
    throw TowerError(ErrorKind::invalid_input, "index tuple does not match the form grade");
  if (coef.is_zero()) return;
  auto [it, inserted] = comps_.emplace(mask, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

Form& Form::operator+=(const Form& other) {
  check_same(*this, other);
  if (q_ != other.q_) throw TowerError(ErrorKind::invalid_input, "adding forms of different grades");
  for (const auto& [m, c] : other.comps_) add_component(m, c);
  return *this;
}

Form& Form::operator-=(const Form& other) {
  check_same(*this, other);
  if (q_ != other.q_) throw TowerError(ErrorKind::invalid_input, "subtracting forms of different grades");
  for (const auto& [m, c] : other.comps_) add_component(m, -c);
  return *this;
}

Form& Form::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    comps_.clear();
    return *this;
  }
  for (auto& [m, e] : comps_) e *= c;
  return *this;
}

Form Form::operator-() const {
  Form f = *this;
  f *= Rational(-1);
  return f;
}

Form Form::times(const RadialRingElement& g) const {
  Form f(n_, q_);
  for (const auto& [m, e] : comps_) f.add_component(m, e * g);
  return f;
}

Form Form::times_r_power(int b) const {
  Form f(n_, q_);
  for (const auto& [m, e] : comps_) f.comps_.emplace(m, e.times_r_power(b));
  return f;
}

std::vector<int> Form::degrees() const {
  std::vector<int> out;
  for (const auto& [m, e] : comps_)
    for (int d : e.degrees()) out.push_back(d);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Form::to_string() const {
  if (comps_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, e] : comps_) {
    if (!first) os << " + ";
    first = false;
    os << "[" << e.to_string() << "]";
    if (m != 0) os << " dx^{" << mask_to_string(m) << "}";
  }
  return os.str();
}

Form wedge(const Form& f, const Form& g) {
  check_same(f, g);
  const int N = f.dimension();
  if (f.grade() + g.grade() > N) throw TowerError(ErrorKind::grade_overflow, "wedge grade exceeds N");
  Form out(N, f.grade() + g.grade());
  for (const auto& [I, a] : f.components()) {
    for (const auto& [J, b] : g.components()) {
      if (I & J) continue;
      int swaps = 0;
      for (int j = 0; j < N; ++j)
        if (J & (1u << j)) swaps += std::popcount(I >> (j + 1));
      RadialRingElement c = a * b;
      out.add_component(I | J, (swaps & 1) ? -c : c);
    }
  }
  return out;
}

Form hodge_star(const Form& f) {
  const int N = f.dimension();
  const IndexMask full = (1u << N) - 1;
  Form out(N, N - f.grade());
  for (const auto& [I, a] : f.components()) {
    const IndexMask C = full & ~I;
    int swaps = 0;
    for (int j = 0; j < N; ++j)
      if (C & (1u << j)) swaps += std::popcount(I >> (j + 1));
    out.add_component(C, (swaps & 1) ? -a : a);
  }
  return out;
}

Form rot(const Form& f) {
  const int N = f.dimension();
  if (f.grade() >= N) throw TowerError(ErrorKind::grade_overflow, "rot of an N-form");
  Form out(N, f.grade() + 1);
  for (const auto& [I, a] : f.components()) {
    for (int i = 0; i < N; ++i) {
      if (I & (1u << i)) continue;
      RadialRingElement d = a.partial(i);
      if (d.is_zero()) continue;
      out.add_component(I | (1u << i), insert_sign(I, i) < 0 ? -d : d);
    }
  }
  return out;
}

Form div(const Form& f) {
  const int N = f.dimension();
  const int q = f.grade();
  if (q == 0) throw TowerError(ErrorKind::grade_underflow, "div of a 0-form");
  Form out = hodge_star(rot(hodge_star(f)));
  if (((q - 1) * N) % 2 != 0) out *= Rational(-1);
  return out;
}

Form componentwise_laplacian(const Form& f) {
  Form out(f.dimension(), f.grade());
  for (const auto& [I, a] : f.components())
    for (int i = 0; i < f.dimension(); ++i) out.add_component(I, a.partial(i).partial(i));
  return out;
}

Form laplacian(const Form& f) {
  Form direct = componentwise_laplacian(f);
  Form composite(f.dimension(), f.grade());
  if (f.grade() > 0) composite += rot(div(f));
  if (f.grade() < f.dimension()) composite += div(rot(f));
  if (!(direct == composite))
    throw TowerError(ErrorKind::consistency_failure, "laplacian: componentwise and rot div + div rot disagree");
  return direct;
}

Form R_op(const Form& f) {
  const int N = f.dimension();
  if (f.grade() >= N) throw TowerError(ErrorKind::grade_overflow, "R of an N-form");
  Form out(N, f.grade() + 1);
  for (const auto& [I, a] : f.components()) {
    for (int i = 0; i < N; ++i) {
      if (I & (1u << i)) continue;
      RadialRingElement c = a.times_coordinate(i);
      out.add_component(I | (1u << i), insert_sign(I, i) < 0 ? -c : c);
    }
  }
  return out;
}

Form T_op(const Form& f) {
  const int N = f.dimension();
  if (f.grade() == 0) throw TowerError(ErrorKind::grade_underflow, "T of a 0-form");
  Form out(N, f.grade() - 1);
  for (const auto& [I, a] : f.components()) {
    for (int i = 0; i < N; ++i) {
      if (!(I & (1u << i))) continue;
      const IndexMask J = I & ~(1u << i);
      RadialRingElement c = a.times_coordinate(i);
      out.add_component(J, insert_sign(J, i) < 0 ? -c : c);
    }
  }
  return out;
}

HomogeneityDecomposition homogeneity_split(const Form& f) {
  HomogeneityDecomposition out;
  for (const auto& [I, a] : f.components()) {
    for (int d : a.degrees()) {
      auto it = out.try_emplace(d, f.dimension(), f.grade()).first;
      it->second.add_component(I, a.homogeneous_component(d));
    }
  }
  return out;
}

Rational sphere_inner_product(const Form& f, const Form& g) {
  check_same(f, g);
  if (f.grade() != g.grade()) throw TowerError(ErrorKind::invalid_input, "sphere inner product of different grades");
  Rational s = 0;
  for (const auto& [I, a] : f.components()) {
    auto it = g.components().find(I);
    if (it == g.components().end()) continue;
    s += sphere_average_product(a.restrict_to_sphere(), it->second.restrict_to_sphere());
  }
  return s;
}

SphereRestriction restrict_to_sphere(const Form& f) {
  SphereRestriction out;
  out.N = f.dimension();
  out.q = f.grade();
  for (const auto& [I, a] : f.components()) {
    Polynomial p = a.restrict_to_sphere();
    if (p.is_zero()) continue;
    for (const auto& [m, c] : p.terms()) out.signature.emplace_back(I, m.parity_mask());
    out.comps.emplace_back(I, std::move(p));
  }
  std::sort(out.signature.begin(), out.signature.end());
  out.signature.erase(std::unique(out.signature.begin(), out.signature.end()), out.signature.end());
  return out;
}

Rational sphere_inner_product(const SphereRestriction& f, const SphereRestriction& g) {
  if (f.N != g.N || f.q != g.q) throw TowerError(ErrorKind::invalid_input, "sphere inner product of mismatched forms");
  bool overlap = false;
  for (std::size_t i = 0, j = 0; i < f.signature.size() && j < g.signature.size() && !overlap;) {
    if (f.signature[i] < g.signature[j]) ++i;
    else if (g.signature[j] < f.signature[i]) ++j;
    else overlap = true;
  }
  Rational s = 0;
  if (!overlap) return s;
  for (std::size_t i = 0, j = 0; i < f.comps.size() && j < g.comps.size();) {
    if (f.comps[i].first < g.comps[j].first) ++i;
    else if (g.comps[j].first < f.comps[i].first) ++j;
    else s += sphere_average_product(f.comps[i++].second, g.comps[j++].second);
  }
  return s;
}

nlohmann::json to_json(const Form& f) {
  nlohmann::json comps = nlohmann::json::object();
  for (const auto& [I, a] : f.components()) comps[mask_to_string(I)] = to_json(a);
  return {{"N", f.dimension()}, {"q", f.grade()}, {"components", comps}};
}

Form form_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("q"))
    throw TowerError(ErrorKind::parse_error, "form needs N and q");
  const int N = j.at("N").get<int>();
  const int q = j.at("q").get<int>();
  if (N < 1 || N > kMaxDim || q < 0 || q > N) throw TowerError(ErrorKind::parse_error, "form N or q out of range");
  Form f(N, q);
  if (j.contains("components")) {
    for (const auto& [key, val] : j.at("components").items()) {
      const IndexMask m = mask_from_string(key, N);
      if (popcount(m) != q) throw TowerError(ErrorKind::parse_error, "component '" + key + "' has wrong length");
      f.add_component(m, ring_from_json(N, val));
    }
  }
  return f;
}

}  // namespace towercalc
