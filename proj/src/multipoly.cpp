#include "multipoly.hpp"

#include <functional>
#include <limits>
#include <numeric>

namespace ka {

int total_degree(const Exponent& a) { return std::accumulate(a.begin(), a.end(), 0); }

bool GradedOrder::operator()(const Exponent& a, const Exponent& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

MultiPoly::MultiPoly(int dim, Mode mode) : dim_(dim), mode_(mode) {
  require(dim >= 1, ErrorCode::invalid_argument, "polynomial dimension must be >= 1");
}

MultiPoly MultiPoly::constant(int dim, const Scalar& c) {
  MultiPoly p(dim, c.mode());
  p.add_term(Exponent(dim, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int dim, int j, Mode mode) {
  require(j >= 0 && j < dim, ErrorCode::invalid_argument, "variable index out of range");
  Exponent a(dim, 0);
  a[j] = 1;
  return monomial(dim, a, Scalar::one(mode));
}

MultiPoly MultiPoly::monomial(int dim, const Exponent& alpha, const Scalar& c) {
  MultiPoly p(dim, c.mode());
  p.add_term(alpha, c);
  return p;
}

int MultiPoly::degree() const {
  return terms_.empty() ? -1 : total_degree(terms_.begin()->first);
}

int MultiPoly::degree_in(int j) const {
  int d = -1;
  for (auto& [a, c] : terms_) d = std::max(d, a[j]);
  return d;
}

Scalar MultiPoly::coeff(const Exponent& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Scalar::zero(mode_) : it->second;
}

void MultiPoly::add_term(const Exponent& alpha, const Scalar& c) {
  require(static_cast<int>(alpha.size()) == dim_, ErrorCode::invalid_argument,
          "exponent length does not match dimension");
  for (int e : alpha) require(e >= 0, ErrorCode::invalid_argument, "negative exponent");
  if (c.mode() != mode_) fail(ErrorCode::mode, "mixed exact/float polynomial terms");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [a, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  require(dim_ == o.dim_, ErrorCode::invalid_argument, "dimension mismatch");
  if (o.mode_ != mode_) fail(ErrorCode::mode, "mixed exact/float polynomials");
  for (auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  require(dim_ == o.dim_, ErrorCode::invalid_argument, "dimension mismatch");
  if (o.mode_ != mode_) fail(ErrorCode::mode, "mixed exact/float polynomials");
  for (auto& [a, c] : o.terms_) add_term(a, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Scalar& c) {
  if (c.mode() != mode_) fail(ErrorCode::mode, "mixed exact/float scaling");
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [a, v] : terms_) v *= c;
  return *this;
}

MultiPoly MultiPoly::mul_truncated(const MultiPoly& a, const MultiPoly& b, int max_degree) {
  require(a.dim_ == b.dim_, ErrorCode::invalid_argument, "dimension mismatch");
  if (a.mode_ != b.mode_) fail(ErrorCode::mode, "mixed exact/float polynomials");
  MultiPoly r(a.dim_, a.mode_);
  Exponent e(a.dim_);
  for (auto& [ea, ca] : a.terms_) {
    int da = total_degree(ea);
    if (da > max_degree) continue;
    for (auto& [eb, cb] : b.terms_) {
      if (da + total_degree(eb) > max_degree) continue;
      for (int k = 0; k < a.dim_; ++k) e[k] = ea[k] + eb[k];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  return MultiPoly::mul_truncated(a, b, std::numeric_limits<int>::max() / 2);
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  return dim_ == o.dim_ && mode_ == o.mode_ && terms_ == o.terms_;
}

MultiPoly MultiPoly::pow(int n) const {
  require(n >= 0, ErrorCode::invalid_argument, "negative power");
  MultiPoly r = constant(dim_, Scalar::one(mode_));
  MultiPoly base = *this;
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return r;
}

MultiPoly MultiPoly::truncated(int max_degree) const {
  MultiPoly r(dim_, mode_);
  for (auto& [a, c] : terms_)
    if (total_degree(a) <= max_degree) r.terms_.emplace(a, c);
  return r;
}

MultiPoly MultiPoly::principal_part() const {
  require(!is_zero(), ErrorCode::invalid_argument, "principal part of the zero polynomial");
  return homogeneous_part(degree());
}

MultiPoly MultiPoly::homogeneous_part(int k) const {
  MultiPoly r(dim_, mode_);
  for (auto& [a, c] : terms_)
    if (total_degree(a) == k) r.terms_.emplace(a, c);
  return r;
}

MultiPoly MultiPoly::derivative(int j) const {
  require(j >= 0 && j < dim_, ErrorCode::invalid_argument, "variable index out of range");
  MultiPoly r(dim_, mode_);
  for (auto& [a, c] : terms_) {
    if (a[j] == 0) continue;
    Exponent b = a;
    --b[j];
    r.add_term(b, c * Scalar::integer(a[j], mode_));
  }
  return r;
}

MultiPoly MultiPoly::derivative(const Exponent& alpha) const {
  require(static_cast<int>(alpha.size()) == dim_, ErrorCode::invalid_argument,
          "multi-index length does not match dimension");
  MultiPoly r(dim_, mode_);
  for (auto& [a, c] : terms_) {
    Exponent b = a;
    Scalar f = c;
    bool zero = false;
    for (int j = 0; j < dim_ && !zero; ++j) {
      if (a[j] < alpha[j]) {
        zero = true;
        break;
      }
      long ff = 1;
      for (int t = 0; t < alpha[j]; ++t) ff *= (a[j] - t);
      if (ff != 1) f *= Scalar::integer(ff, mode_);
      b[j] -= alpha[j];
    }
    if (!zero) r.add_term(b, f);
  }
  return r;
}

MultiPoly MultiPoly::apply_as_operator(const MultiPoly& f) const {
  require(dim_ == f.dim_, ErrorCode::invalid_argument, "operator/data dimension mismatch");
  if (f.mode_ != mode_) fail(ErrorCode::mode, "mixed exact/float operator application");
  MultiPoly r(dim_, mode_);
  int fdeg = f.degree();
  for (auto& [a, c] : terms_) {
    int k = total_degree(a);
    if (k > fdeg) continue;
    r += f.derivative(a) * (c * Scalar::i_pow(3 * k, mode_));  // (-i)^k = i^{3k}
  }
  return r;
}

cplx MultiPoly::evaluate(std::span<const cplx> x) const {
  require(static_cast<int>(x.size()) == dim_, ErrorCode::invalid_argument,
          "point dimension mismatch");
  cplx s = 0;
  for (auto& [a, c] : terms_) {
    cplx m = c.to_complex();
    for (int j = 0; j < dim_; ++j)
      for (int t = 0; t < a[j]; ++t) m *= x[j];
    s += m;
  }
  return s;
}

Scalar MultiPoly::evaluate_exact(std::span<const Scalar> x) const {
  require(static_cast<int>(x.size()) == dim_, ErrorCode::invalid_argument,
          "point dimension mismatch");
  Scalar s = Scalar::zero(mode_);
  for (auto& [a, c] : terms_) {
    Scalar m = c;
    for (int j = 0; j < dim_; ++j)
      for (int t = 0; t < a[j]; ++t) m *= x[j];
    s += m;
  }
  return s;
}

MultiPoly MultiPoly::restrict_zero(int j) const {
  MultiPoly r(dim_, mode_);
  for (auto& [a, c] : terms_)
    if (a[j] == 0) r.terms_.emplace(a, c);
  return r;
}

MultiPoly MultiPoly::coefficient_in(int j, int k) const {
  require(dim_ >= 2, ErrorCode::invalid_argument, "need at least two variables");
  MultiPoly r(dim_ - 1, mode_);
  for (auto& [a, c] : terms_) {
    if (a[j] != k) continue;
    Exponent b;
    for (int t = 0; t < dim_; ++t)
      if (t != j) b.push_back(a[t]);
    r.add_term(b, c);
  }
  return r;
}

MultiPoly MultiPoly::embed(int new_dim, int j) const {
  require(new_dim == dim_ + 1 && j >= 0 && j <= dim_, ErrorCode::invalid_argument,
          "bad embedding");
  MultiPoly r(new_dim, mode_);
  for (auto& [a, c] : terms_) {
    Exponent b = a;
    b.insert(b.begin() + j, 0);
    r.terms_.emplace(b, c);
  }
  return r;
}

MultiPoly MultiPoly::to_mode(Mode m) const {
  if (m == mode_) return *this;
  MultiPoly r(dim_, m);
  for (auto& [a, c] : terms_) r.add_term(a, c.to_mode(m));
  return r;
}

std::size_t MultiPoly::hash() const {
  std::size_t h = std::hash<int>()(dim_) ^ (mode_ == Mode::exact ? 0x9e37u : 0x7f4au);
  for (auto& [a, c] : terms_) {
    for (int e : a) h = h * 1000003u ^ std::hash<int>()(e);
    h = h * 1000003u ^ std::hash<std::string>()(c.re_string());
    h = h * 1000003u ^ std::hash<std::string>()(c.im_string());
  }
  return h;
}

namespace {

std::string monomial_string(const Exponent& a) {
  std::string s;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(j + 1);
    if (a[j] > 1) s += "^" + std::to_string(a[j]);
  }
  return s;
}

std::string term_string(const Scalar& c, const Exponent& a) {
  std::string m = monomial_string(a);
  std::string cs = c.to_string();
  if (m.empty()) return cs;
  if (c.is_real()) {
    std::string r = c.re_string();
    if (r == "1") return m;
    if (r == "-1") return "-" + m;
  }
  return cs + "*" + m;
}

}  // namespace

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto& [a, c] : terms_) {
    std::string t = term_string(c, a);
    if (s.empty())
      s = t;
    else if (t[0] == '-')
      s += " - " + t.substr(1);
    else
      s += " + " + t;
  }
  return s;
}

nlohmann::json MultiPoly::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (auto& [a, c] : terms_)
    terms.push_back({{"alpha", a}, {"re", c.re_string()}, {"im", c.im_string()}});
  return {{"dim", dim_}, {"mode", mode_name(mode_)}, {"terms", terms}};
}

MultiPoly MultiPoly::from_json(const nlohmann::json& j) {
  try {
    int dim = j.at("dim").get<int>();
    Mode mode = j.contains("mode") ? mode_from_name(j.at("mode").get<std::string>()) : Mode::exact;
    MultiPoly p(dim, mode);
    for (auto& t : j.at("terms")) {
      auto a = t.at("alpha").get<Exponent>();
      std::string re = t.contains("re") ? t.at("re").get<std::string>() : "0";
      std::string im = t.contains("im") ? t.at("im").get<std::string>() : "0";
      p.add_term(a, Scalar::from_strings(re, im, mode));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("bad polynomial JSON: ") + e.what());
  }
}

}  // namespace ka
