#include "cauchy.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "compositions.hpp"

namespace ka {

namespace {

// bring a decomposition and a datum to a common mode
std::pair<SlabDecomposition, CauchyData> harmonize(const SlabDecomposition& dec, const CauchyData& f) {
  require(f.dim() == dec.dim - 1, ErrorCode::invalid_argument,
          "Cauchy datum must live in d-1 = " + std::to_string(dec.dim - 1) + " variables");
  if (f.kind() == CauchyData::Kind::numeric || f.mode() == dec.mode()) return {dec, f};
  if (dec.mode() == Mode::floating) return {dec, f.to_mode(Mode::floating)};
  return {dec.to_mode(Mode::floating), f};
}

Scalar from_mpz(const mpz_class& z, Mode m) {
  return m == Mode::exact ? Scalar::exact(mpq_class(z)) : Scalar::floating({z.get_d(), 0.0});
}

cplx i_pow_over_factorial(double xd, int l) {
  // (i xd)^l / l!
  cplx v = 1;
  for (int k = 1; k <= l; ++k) v *= cplx(0, xd) / double(k);
  return v;
}

}  // namespace

CSequence::CSequence(SlabDecomposition dec, CauchyData f) {
  auto [d2, f2] = harmonize(dec, f);
  dec_ = std::move(d2);
  f_ = std::move(f2);
}

void CSequence::extend(int l) {
  int m = dec_.m;
  Mode mode = f_.kind() == CauchyData::Kind::numeric ? Mode::floating : f_.mode();
  while (static_cast<int>(c_.size()) <= l) {
    int idx = static_cast<int>(c_.size());
    if (idx < m - 1) {
      c_.push_back(CauchyData::zero(f_.dim(), mode));
    } else if (idx == m - 1) {
      c_.push_back(f_);
    } else {
      CauchyData sum = CauchyData::zero(f_.dim(), mode);
      for (int k = 0; k < m; ++k) {
        int src = k + idx - m;
        if (src < 0 || dec_.q(k).is_zero() || c_[src].is_zero()) continue;
        sum = sum + c_[src].apply_operator(dec_.q(k));
      }
      c_.push_back(-sum);
    }
  }
}

CauchyData CSequence::get(int l) {
  require(l >= 0, ErrorCode::invalid_argument, "C_l needs l >= 0");
  std::lock_guard<std::mutex> lock(mu_);
  extend(l);
  return c_[l];
}

std::optional<int> CSequence::last_nonzero(int limit) {
  std::lock_guard<std::mutex> lock(mu_);
  extend(limit);
  int m = dec_.m, run = 0, last = -1;
  for (int l = 0; l <= limit; ++l) {
    if (c_[l].is_zero()) {
      if (++run >= m && l >= m - 1) return last;
    } else {
      run = 0;
      last = l;
    }
  }
  return std::nullopt;
}

CauchyData c_op_recursive(const SlabDecomposition& dec, int l, const CauchyData& f) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<CSequence>> cache;
  std::shared_ptr<CSequence> seq;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dec.hash(), f.hash());
    auto it = cache.find(key);
    if (it != cache.end() && it->second->datum() == f &&
        it->second->decomposition().original == dec.original) {
      seq = it->second;
    } else {
      if (cache.size() > 256) cache.clear();
      seq = std::make_shared<CSequence>(dec, f);
      cache[key] = seq;
    }
  }
  return seq->get(l);
}

CauchyData c_op_explicit(const SlabDecomposition& dec0, int l, const CauchyData& f0) {
  require(l >= 0, ErrorCode::invalid_argument, "C_l needs l >= 0");
  auto [dec, f] = harmonize(dec0, f0);
  int m = dec.m;
  Mode mode = f.kind() == CauchyData::Kind::numeric ? Mode::floating : f.mode();
  if (l < m - 1 || f.is_zero()) return CauchyData::zero(f.dim(), mode);
  if (l == m - 1) return f;
  int trunc = f.poly_degree() >= 0 ? f.poly_degree() : std::numeric_limits<int>::max() / 4;
  Mode opmode = f.kind() == CauchyData::Kind::numeric ? dec.mode() : mode;
  // powers[k][s] = Q_{m-k}^s truncated
  std::vector<std::vector<MultiPoly>> powers(m + 1);
  auto power = [&](int k, int s) -> const MultiPoly& {
    auto& v = powers[k];
    if (v.empty()) v.push_back(MultiPoly::constant(f.dim(), Scalar::one(opmode)));
    while (static_cast<int>(v.size()) <= s)
      v.push_back(MultiPoly::mul_truncated(v.back(), dec.q(m - k), trunc));
    return v[s];
  };
  MultiPoly op(f.dim(), opmode);
  for_each_weighted_composition(l - m + 1, m, [&](const std::vector<int>& s) {
    int abs_s = 0;
    for (int k = 1; k <= m; ++k) {
      if (s[k - 1] > 0 && dec.q(m - k).is_zero()) return;
      abs_s += s[k - 1];
    }
    MultiPoly prod = MultiPoly::constant(f.dim(), Scalar::one(opmode));
    for (int k = 1; k <= m && !prod.is_zero(); ++k)
      if (s[k - 1] > 0) prod = MultiPoly::mul_truncated(prod, power(k, s[k - 1]), trunc);
    if (prod.is_zero()) return;
    Scalar coef = from_mpz(multinomial(s), opmode);
    if (abs_s % 2 == 1) coef = -coef;
    op += prod * coef;
  });
  return f.apply_operator(op);
}

Estimate LSeries::evaluate(std::span<const double> xprime, double xd) const {
  Estimate e;
  for (int l = 0; l < static_cast<int>(C.size()); ++l) {
    if (C[l].is_zero()) continue;
    Estimate c = C[l].evaluate(xprime);
    cplx w = i_pow_over_factorial(xd, l);
    e.value += c.value * w;
    e.error += c.error * std::abs(w);
  }
  return e;
}

LSeries l_series(const SlabDecomposition& dec, const CauchyData& f, int n) {
  require(n >= 0, ErrorCode::invalid_argument, "truncation order must be >= 0");
  CSequence seq(dec, f);
  LSeries s;
  s.n = n;
  for (int l = 0; l <= n; ++l) s.C.push_back(seq.get(l));
  s.last_nonzero = seq.last_nonzero(n);
  return s;
}

CauchySolution cauchy_solve(const SlabDecomposition& dec, const std::vector<CauchyData>& h, int n) {
  int m = dec.m;
  require(static_cast<int>(h.size()) == m, ErrorCode::invalid_argument,
          "need m = " + std::to_string(m) + " Cauchy data, got " + std::to_string(h.size()));
  require(n >= m - 1, ErrorCode::invalid_argument, "truncation order must be >= m-1");
  CauchySolution sol;
  sol.h = h;
  sol.n = n;
  sol.terminated = true;
  std::vector<std::vector<CauchyData>> C(m);
  std::optional<SlabDecomposition> used;
  for (int j = 0; j < m; ++j) {
    CSequence seq(dec, h[j]);
    for (int l = 0; l <= n; ++l) C[j].push_back(seq.get(l));
    auto last = seq.last_nonzero(n);
    sol.terminated = sol.terminated && last.has_value();
    if (!used || seq.decomposition().mode() == Mode::floating) used = seq.decomposition();
  }
  sol.dec = *used;
  bool numeric = false;
  for (auto& f : h) numeric = numeric || f.kind() == CauchyData::Kind::numeric;
  Mode mode = numeric ? Mode::floating : sol.dec.mode();
  for (int l = 0; l <= n; ++l) {
    CauchyData u = CauchyData::zero(dec.dim - 1, mode);
    for (int j = 0; j < m; ++j)
      for (int k = 0; j + k + 1 <= m && l + k <= n; ++k) {
        const CauchyData& c = C[j][l + k];
        if (c.is_zero()) continue;
        u = u + c.apply_operator(sol.dec.q(j + k + 1));
      }
    sol.U.push_back(u);
  }
  return sol;
}

Estimate CauchySolution::evaluate(std::span<const double> xprime, double xd) const {
  Estimate e;
  double tail = 0;
  int nterms = static_cast<int>(U.size());
  for (int l = 0; l < nterms; ++l) {
    if (U[l].is_zero()) continue;
    Estimate c = U[l].evaluate(xprime);
    cplx w = i_pow_over_factorial(xd, l);
    e.value += c.value * w;
    e.error += c.error * std::abs(w);
    if (l >= nterms - dec.m) tail = std::max(tail, std::abs(c.value * w));
  }
  if (!terminated) e.error += tail;
  return e;
}

std::optional<MultiPoly> CauchySolution::as_polynomial() const {
  if (!terminated) return std::nullopt;
  int d = dec.dim;
  MultiPoly u(d, dec.mode());
  for (auto& f : h)
    if (f.kind() != CauchyData::Kind::poly) return std::nullopt;
  for (int l = 0; l < static_cast<int>(U.size()); ++l) {
    if (U[l].is_zero()) continue;
    MultiPoly p = U[l].as_poly().embed(d, d - 1);
    Exponent a(d, 0);
    a[d - 1] = l;
    Scalar c = Scalar::i_pow(l, u.mode());
    mpz_class fac;
    mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(l));
    c /= from_mpz(fac, u.mode());
    u += p * MultiPoly::monomial(d, a, c);
  }
  return u;
}

nlohmann::json CauchySolution::summary() const {
  nlohmann::json traces = nlohmann::json::array();
  for (int s = 0; s < dec.m && s < static_cast<int>(U.size()); ++s) traces.push_back(U[s].to_string());
  nlohmann::json j = {{"n", n}, {"m", dec.m}, {"terminated", terminated}, {"traces", traces}};
  if (auto p = as_polynomial()) j["polynomial"] = p->to_string();
  return j;
}

PrepIdentityResult prep_identity_check(const SlabDecomposition& dec0, const CauchyData& f0, int n) {
  auto [dec, f] = harmonize(dec0, f0);
  require(f.kind() != CauchyData::Kind::numeric, ErrorCode::precondition,
          "the preparation identity is checked exactly; numeric data are not supported");
  int m = dec.m, d = dec.dim;
  PrepIdentityResult res;
  std::vector<CauchyData> C;
  for (int l = 0; l <= n; ++l) C.push_back(c_op_explicit(dec, l, f));
  res.checked_up_to = n - m;
  if (f.kind() == CauchyData::Kind::poly) {
    MultiPoly L(d, f.mode());
    for (int l = 0; l <= n; ++l) {
      if (C[l].is_zero()) continue;
      Exponent a(d, 0);
      a[d - 1] = l;
      Scalar c = Scalar::i_pow(l, f.mode());
      mpz_class fac;
      mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(l));
      c /= from_mpz(fac, f.mode());
      L += C[l].as_poly().embed(d, d - 1) * MultiPoly::monomial(d, a, c);
    }
    MultiPoly r = dec.original.to_mode(f.mode()).apply_as_operator(L);
    for (int l = 0; l <= n - m; ++l) res.residual.push_back(CauchyData::poly(r.coefficient_in(d - 1, l)));
  } else {
    for (int l = 0; l <= n - m; ++l) {
      CauchyData s = CauchyData::zero(d - 1, f.mode());
      for (int k = 0; k <= m; ++k)
        if (!dec.q(k).is_zero() && !C[l + k].is_zero()) s = s + C[l + k].apply_operator(dec.q(k));
      res.residual.push_back(s);
    }
  }
  res.holds = true;
  for (auto& r : res.residual) res.holds = res.holds && r.is_zero();
  return res;
}

CauchyData verify_prep_identity(const SlabDecomposition& dec, const std::vector<CauchyData>& h, int s) {
  int m = dec.m;
  require(static_cast<int>(h.size()) == m, ErrorCode::invalid_argument, "need m Cauchy data");
  require(s >= 0 && s <= m - 1, ErrorCode::invalid_argument, "trace index s must be in [0, m-1]");
  auto [ds, hs] = harmonize(dec, h[s]);
  CauchyData r = -hs;
  for (int j = 0; j <= s; ++j) {
    auto [dj, fj] = harmonize(dec, h[j]);
    for (int k = m - 1 - s; k <= m - 1 - j; ++k) {
      CauchyData c = c_op_explicit(dj, k + s, fj);
      if (c.is_zero() || dj.q(j + k + 1).is_zero()) continue;
      r = r + c.apply_operator(dj.q(j + k + 1));
    }
  }
  return r;
}

Estimate remark_formula_eval(const SlabDecomposition& dec, const std::vector<CauchyData>& h,
                             std::span<const double> xprime, double xd, int n) {
  int m = dec.m;
  require(static_cast<int>(h.size()) == m, ErrorCode::invalid_argument, "need m Cauchy data");
  Estimate e;
  for (int j = 0; j < m; ++j) {
    auto [dj, fj] = harmonize(dec, h[j]);
    for (int l = m - 1; l <= n; ++l) {
      CauchyData c = c_op_explicit(dj, l, fj);
      if (c.is_zero()) continue;
      for (int k = 0; j + k + 1 <= m && k <= l; ++k) {
        if (dj.q(j + k + 1).is_zero()) continue;
        Estimate v = c.apply_operator(dj.q(j + k + 1)).evaluate(xprime);
        cplx w = i_pow_over_factorial(xd, l - k);
        e.value += v.value * w;
        e.error += v.error * std::abs(w);
      }
    }
  }
  return e;
}

TailBound convergence_tail_bound(int n, double C, double R, double B, double rho, double gamma, int m,
                                 double q) {
  require(n >= 0 && C >= 0 && R >= 0 && B >= 0 && m >= 1, ErrorCode::invalid_argument,
          "tail bound needs nonnegative parameters");
  TailBound tb;
  if (B == 0.0 || C == 0.0) return tb;
  double beta = 1.0 - rho * gamma;
  if (beta <= 0.0) {
    tb.diverges = true;
    tb.value = std::numeric_limits<double>::infinity();
    return tb;
  }
  double logK = 1.0 + std::log(double(m)) + std::log(std::max(q, 1.0)) +
                std::log(std::max(R, 1.0)) + std::log(B);
  double logC = std::log(C);
  auto logterm = [&](double l) { return logC + l * (logK - beta * std::log(l)); };
  // the term is largest at l* = exp(logK / beta - 1)
  double lstar = std::exp(logK / beta - 1.0);
  double peak = lstar > n + 1 ? logterm(lstar) : logterm(n + 1.0);
  if (!std::isfinite(peak) || peak > 700.0) {
    tb.overflow = true;
    tb.value = std::numeric_limits<double>::infinity();
    return tb;
  }
  double acc = -std::numeric_limits<double>::infinity();
  for (long l = n + 1;; ++l) {
    double t = logterm(double(l));
    double hi = std::max(acc, t);
    acc = hi + std::log(std::exp(acc - hi) + std::exp(t - hi));
    if (double(l) > lstar && t < acc - 40.0) break;
    if (l - n > 10000000) break;
  }
  tb.value = std::exp(acc);
  return tb;
}

int auto_truncation(double tol, double C, double R, double B, double rho, double gamma, int m, double q,
                    int n_max) {
  for (int n = 0; n <= n_max; ++n) {
    auto tb = convergence_tail_bound(n, C, R, B, rho, gamma, m, q);
    if (tb.diverges) return -1;
    if (tb.value <= tol) return n;
  }
  return -1;
}

}  // namespace ka
