#include "cauchy_data.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace ka {

namespace {

std::string freq_key(const std::vector<Scalar>& f) {
  std::string k;
  for (auto& s : f) k += s.re_string() + "," + s.im_string() + ";";
  return k;
}

bool all_zero(const std::vector<Scalar>& f) {
  return std::all_of(f.begin(), f.end(), [](const Scalar& s) { return s.is_zero(); });
}

// Q(D + lambda) p, i.e. exp(-i lambda.x) Q(D) (p exp(i lambda.x))
MultiPoly shifted_apply(const MultiPoly& q, const std::vector<Scalar>& lambda, const MultiPoly& p) {
  if (all_zero(lambda)) return q.apply_as_operator(p);
  Mode mode = p.mode();
  Scalar mi = -Scalar::imag_unit(mode);
  MultiPoly out(p.dim(), mode);
  // cache of (D_j + lambda_j)^k p along the monomial structure
  for (auto& [beta, c] : q.terms()) {
    MultiPoly r = p;
    for (int j = 0; j < p.dim() && !r.is_zero(); ++j)
      for (int t = 0; t < beta[j]; ++t) r = r.derivative(j) * mi + r * lambda[j];
    out += r * c;
  }
  return out;
}

}  // namespace

CauchyData CauchyData::zero(int dim, Mode mode) {
  require(dim >= 1, ErrorCode::invalid_argument, "Cauchy data dimension must be >= 1");
  CauchyData f;
  f.dim_ = dim;
  f.mode_ = mode;
  return f;
}

CauchyData CauchyData::poly(const MultiPoly& p) {
  CauchyData f = zero(p.dim(), p.mode());
  if (!p.is_zero())
    f.sym_.push_back({std::vector<Scalar>(p.dim(), Scalar::zero(p.mode())), p});
  return f;
}

CauchyData CauchyData::exppoly(const std::vector<ExpPolyTerm>& terms, int dim, Mode mode) {
  CauchyData f = zero(dim, mode);
  for (auto& t : terms) {
    require(static_cast<int>(t.freq.size()) == dim && t.poly.dim() == dim,
            ErrorCode::invalid_argument, "exponential term dimension mismatch");
    if (t.poly.mode() != mode) fail(ErrorCode::mode, "mixed exact/float exponential data");
    for (auto& s : t.freq)
      if (s.mode() != mode) fail(ErrorCode::mode, "mixed exact/float frequency");
    f.sym_.push_back(t);
  }
  f.normalize();
  return f;
}

CauchyData CauchyData::numeric(std::shared_ptr<const DerivativeOracle> g) {
  require(g != nullptr, ErrorCode::invalid_argument, "null derivative oracle");
  CauchyData f = zero(g->dim(), Mode::floating);
  f.numeric_ = true;
  f.num_.push_back({g, MultiPoly::constant(g->dim(), Scalar::one(Mode::floating))});
  return f;
}

CauchyData CauchyData::parse(const std::string& text, int dim, Mode mode) {
  return exppoly(parse_exp_poly(text, dim, mode), dim, mode);
}

void CauchyData::normalize() {
  std::vector<ExpPolyTerm> merged;
  for (auto& t : sym_) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const ExpPolyTerm& m) { return m.freq == t.freq; });
    if (it == merged.end())
      merged.push_back(t);
    else
      it->poly += t.poly;
  }
  std::erase_if(merged, [](const ExpPolyTerm& t) { return t.poly.is_zero(); });
  std::sort(merged.begin(), merged.end(), [](const ExpPolyTerm& a, const ExpPolyTerm& b) {
    return freq_key(a.freq) < freq_key(b.freq);
  });
  sym_ = std::move(merged);

  std::vector<NumericTerm> nm;
  for (auto& t : num_) {
    auto it = std::find_if(nm.begin(), nm.end(),
                           [&](const NumericTerm& m) { return m.oracle == t.oracle; });
    if (it == nm.end())
      nm.push_back(t);
    else
      it->op += t.op;
  }
  std::erase_if(nm, [](const NumericTerm& t) { return t.op.is_zero(); });
  num_ = std::move(nm);
}

CauchyData::Kind CauchyData::kind() const {
  if (numeric_) return Kind::numeric;
  for (auto& t : sym_)
    if (!all_zero(t.freq)) return Kind::exppoly;
  return Kind::poly;
}

bool CauchyData::is_zero() const { return !numeric_ && sym_.empty(); }

int CauchyData::poly_degree() const {
  if (numeric_) return -2;
  if (sym_.empty()) return -1;
  if (kind() != Kind::poly) return -2;
  return sym_[0].poly.degree();
}

const MultiPoly& CauchyData::as_poly() const {
  static thread_local MultiPoly zero_poly;
  require(kind() == Kind::poly, ErrorCode::invalid_argument, "datum is not a polynomial");
  if (sym_.empty()) {
    zero_poly = MultiPoly(dim_, mode_);
    return zero_poly;
  }
  return sym_[0].poly;
}

CauchyData CauchyData::to_numeric() const {
  if (numeric_) return *this;
  CauchyData f = zero(dim_, Mode::floating);
  f.numeric_ = true;
  if (sym_.empty()) return f;
  CauchyData fl = zero(dim_, Mode::floating);
  for (auto& t : sym_) {
    ExpPolyTerm u{{}, t.poly.to_mode(Mode::floating)};
    for (auto& s : t.freq) u.freq.push_back(s.to_mode(Mode::floating));
    fl.sym_.push_back(u);
  }
  fl.normalize();
  f.num_.push_back({std::make_shared<SymbolicOracle>(fl),
                    MultiPoly::constant(dim_, Scalar::one(Mode::floating))});
  return f;
}

CauchyData CauchyData::operator+(const CauchyData& o) const {
  require(dim_ == o.dim_, ErrorCode::invalid_argument, "Cauchy data dimension mismatch");
  if (numeric_ || o.numeric_) {
    CauchyData a = to_numeric(), b = o.to_numeric();
    a.num_.insert(a.num_.end(), b.num_.begin(), b.num_.end());
    a.normalize();
    return a;
  }
  if (o.sym_.empty()) return *this;
  if (sym_.empty()) return o;
  if (mode_ != o.mode_) fail(ErrorCode::mode, "mixed exact/float Cauchy data");
  CauchyData r = *this;
  r.sym_.insert(r.sym_.end(), o.sym_.begin(), o.sym_.end());
  r.normalize();
  return r;
}

CauchyData CauchyData::operator-() const {
  CauchyData r = *this;
  for (auto& t : r.sym_) t.poly = -t.poly;
  for (auto& t : r.num_) t.op = -t.op;
  return r;
}

CauchyData CauchyData::operator-(const CauchyData& o) const { return *this + (-o); }

CauchyData CauchyData::scaled(const Scalar& c) const {
  CauchyData r = *this;
  if (numeric_) {
    Scalar cf = c.to_mode(Mode::floating);
    for (auto& t : r.num_) t.op *= cf;
  } else {
    for (auto& t : r.sym_) t.poly *= c;
  }
  r.normalize();
  return r;
}

CauchyData CauchyData::to_mode(Mode m) const {
  if (numeric_ || m == mode_) return *this;
  CauchyData r = zero(dim_, m);
  for (auto& t : sym_) {
    ExpPolyTerm u{{}, t.poly.to_mode(m)};
    for (auto& s : t.freq) u.freq.push_back(s.to_mode(m));
    r.sym_.push_back(u);
  }
  r.normalize();
  return r;
}

CauchyData CauchyData::apply_operator(const MultiPoly& q) const {
  require(q.dim() == dim_, ErrorCode::invalid_argument, "operator/data dimension mismatch");
  CauchyData r = zero(dim_, mode_);
  r.numeric_ = numeric_;
  if (numeric_) {
    MultiPoly qf = q.to_mode(Mode::floating);
    for (auto& t : num_) {
      MultiPoly op = qf * t.op;
      if (op.degree() > t.oracle->max_order())
        fail(ErrorCode::precondition, "derivative order " + std::to_string(op.degree()) +
                                          " exceeds numeric datum max_order " +
                                          std::to_string(t.oracle->max_order()));
      r.num_.push_back({t.oracle, op});
    }
  } else {
    if (q.mode() != mode_) fail(ErrorCode::mode, "mixed exact/float operator application");
    for (auto& t : sym_) r.sym_.push_back({t.freq, shifted_apply(q, t.freq, t.poly)});
  }
  r.normalize();
  return r;
}

CauchyData CauchyData::differentiate(const Exponent& alpha) const {
  require(static_cast<int>(alpha.size()) == dim_, ErrorCode::invalid_argument,
          "multi-index length does not match dimension");
  int k = total_degree(alpha);
  // d^alpha = i^{|alpha|} D^alpha
  Mode m = numeric_ ? Mode::floating : mode_;
  return apply_operator(MultiPoly::monomial(dim_, alpha, Scalar::i_pow(k, m)));
}

Estimate CauchyData::evaluate(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == dim_, ErrorCode::invalid_argument, "point dimension mismatch");
  Estimate e;
  if (!numeric_) {
    // symbolic data report no error; only rounding enters
    std::vector<cplx> z(x.begin(), x.end());
    for (auto& t : sym_) {
      cplx phase = 0;
      for (int j = 0; j < dim_; ++j) phase += t.freq[j].to_complex() * x[j];
      e.value += t.poly.evaluate(z) * std::exp(cplx(0, 1) * phase);
    }
    return e;
  }
  for (auto& t : num_) {
    for (auto& [beta, c] : t.op.terms()) {
      Estimate d = t.oracle->derivative(x, beta);
      cplx f = c.to_complex() * std::pow(cplx(0, -1), total_degree(beta));
      e.value += f * d.value;
      e.error += std::abs(f) * d.error;
    }
  }
  return e;
}

bool CauchyData::operator==(const CauchyData& o) const {
  if (dim_ != o.dim_ || numeric_ != o.numeric_) return false;
  if (numeric_) {
    if (num_.size() != o.num_.size()) return false;
    for (std::size_t k = 0; k < num_.size(); ++k)
      if (num_[k].oracle != o.num_[k].oracle || num_[k].op != o.num_[k].op) return false;
    return true;
  }
  if (sym_.empty() && o.sym_.empty()) return true;
  if (mode_ != o.mode_ || sym_.size() != o.sym_.size()) return false;
  for (std::size_t k = 0; k < sym_.size(); ++k)
    if (!(sym_[k].freq == o.sym_[k].freq) || sym_[k].poly != o.sym_[k].poly) return false;
  return true;
}

std::size_t CauchyData::hash() const {
  std::size_t h = static_cast<std::size_t>(dim_) * 31u + (numeric_ ? 7u : 3u);
  for (auto& t : sym_) h = h * 1000003u ^ (t.poly.hash() + std::hash<std::string>()(freq_key(t.freq)));
  for (auto& t : num_)
    h = h * 1000003u ^ (t.op.hash() + std::hash<const void*>()(t.oracle.get()));
  return h;
}

std::string CauchyData::to_string() const {
  if (numeric_) {
    std::string s;
    for (auto& t : num_) {
      if (!s.empty()) s += " + ";
      s += "(" + t.op.to_string() + ")(D)[" + t.oracle->describe() + "]";
    }
    return s.empty() ? "0" : s;
  }
  if (sym_.empty()) return "0";
  std::string s;
  for (auto& t : sym_) {
    if (!s.empty()) s += " + ";
    if (all_zero(t.freq)) {
      s += sym_.size() == 1 ? t.poly.to_string() : "(" + t.poly.to_string() + ")";
      continue;
    }
    MultiPoly lin(dim_, mode_);
    for (int j = 0; j < dim_; ++j) {
      Exponent a(dim_, 0);
      a[j] = 1;
      lin.add_term(a, t.freq[j]);
    }
    s += "(" + t.poly.to_string() + ")*exp(i*(" + lin.to_string() + "))";
  }
  return s;
}

nlohmann::json CauchyData::to_json() const {
  nlohmann::json j;
  j["dim"] = dim_;
  switch (kind()) {
    case Kind::poly: j["kind"] = "poly"; break;
    case Kind::exppoly: j["kind"] = "exppoly"; break;
    default: j["kind"] = "numeric"; break;
  }
  j["text"] = to_string();
  if (!numeric_) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto& t : sym_) {
      nlohmann::json f = nlohmann::json::array();
      for (auto& s : t.freq) f.push_back({{"re", s.re_string()}, {"im", s.im_string()}});
      terms.push_back({{"freq", f}, {"poly", t.poly.to_json()}});
    }
    j["terms"] = terms;
  }
  return j;
}

SymbolicOracle::SymbolicOracle(CauchyData f) : f_(std::move(f)) {
  require(f_.kind() != CauchyData::Kind::numeric, ErrorCode::invalid_argument,
          "symbolic oracle needs symbolic data");
}

Estimate SymbolicOracle::derivative(std::span<const double> x, const Exponent& beta) const {
  return f_.differentiate(beta).evaluate(x);
}

}  // namespace ka
