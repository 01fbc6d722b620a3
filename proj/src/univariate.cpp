#include "univariate.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace ka {

void trim(UPolyQ& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int udegree(const UPolyQ& p) { return static_cast<int>(p.size()) - 1; }

UPolyQ umul(const UPolyQ& a, const UPolyQ& b) {
  if (a.empty() || b.empty()) return {};
  UPolyQ r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

UPolyQ usub(const UPolyQ& a, const UPolyQ& b) {
  UPolyQ r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

void udivmod(const UPolyQ& a, const UPolyQ& b, UPolyQ& q, UPolyQ& r) {
  require(!b.empty(), ErrorCode::numeric, "polynomial division by zero");
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
  while (!r.empty() && r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    mpq_class f = r.back() / b.back();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
    r.pop_back();
    trim(r);
  }
  trim(q);
}

UPolyQ ugcd(UPolyQ a, UPolyQ b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPolyQ q, r;
    udivmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  mpq_class lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

UPolyQ uderivative(const UPolyQ& p) {
  UPolyQ r;
  for (std::size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * static_cast<long>(i));
  trim(r);
  return r;
}

mpq_class ueval(const UPolyQ& p, const mpq_class& x) {
  mpq_class s = 0;
  for (std::size_t i = p.size(); i-- > 0;) s = s * x + p[i];
  return s;
}

namespace {

std::vector<UPolyQ> sturm_sequence(const UPolyQ& p) {
  std::vector<UPolyQ> seq{p, uderivative(p)};
  while (!seq.back().empty()) {
    UPolyQ q, r;
    udivmod(seq[seq.size() - 2], seq.back(), q, r);
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    seq.push_back(r);
  }
  if (seq.back().empty()) seq.pop_back();
  return seq;
}

int sign_changes(const std::vector<UPolyQ>& seq, const mpq_class& x) {
  int changes = 0, last = 0;
  for (auto& p : seq) {
    int s = sgn(ueval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

UPolyQ squarefree(const UPolyQ& p) {
  UPolyQ g = ugcd(p, uderivative(p));
  UPolyQ q, r;
  udivmod(p, g, q, r);
  return q;
}

mpq_class root_bound(const UPolyQ& p) {
  mpq_class m = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    mpq_class v = abs(p[i] / p.back());
    if (v > m) m = v;
  }
  return m + 1;
}

}  // namespace

int count_real_roots(const UPolyQ& p0) {
  UPolyQ p = p0;
  trim(p);
  require(!p.empty(), ErrorCode::invalid_argument, "zero polynomial has no finite root set");
  if (udegree(p) == 0) return 0;
  UPolyQ s = squarefree(p);
  auto seq = sturm_sequence(s);
  mpq_class b = root_bound(s);
  return sign_changes(seq, -b) - sign_changes(seq, b);
}

std::vector<double> real_roots(const UPolyQ& p0) {
  UPolyQ p = p0;
  trim(p);
  require(!p.empty(), ErrorCode::invalid_argument, "zero polynomial has no finite root set");
  std::vector<double> out;
  if (udegree(p) == 0) return out;
  UPolyQ s = squarefree(p);
  auto seq = sturm_sequence(s);
  mpq_class b = root_bound(s);
  // isolate: intervals (lo, hi] each holding exactly one root
  std::vector<std::pair<mpq_class, mpq_class>> work{{-b, b}}, isolated;
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    int n = sign_changes(seq, lo) - sign_changes(seq, hi);
    if (n == 0) continue;
    if (n == 1) {
      isolated.emplace_back(lo, hi);
      continue;
    }
    mpq_class mid = (lo + hi) / 2;
    work.emplace_back(lo, mid);
    work.emplace_back(mid, hi);
  }
  for (auto& [lo0, hi0] : isolated) {
    mpq_class lo = lo0, hi = hi0;
    if (sgn(ueval(s, hi)) == 0) {
      out.push_back(hi.get_d());
      continue;
    }
    int shi = sgn(ueval(s, hi));
    for (int it = 0; it < 200; ++it) {
      double dl = lo.get_d(), dh = hi.get_d();
      if (dh - dl <= 1e-17 * std::max(1.0, std::fabs(dh))) break;
      mpq_class mid = (lo + hi) / 2;
      int sm = sgn(ueval(s, mid));
      if (sm == 0) {
        lo = hi = mid;
        break;
      }
      if (sm == shi)
        hi = mid;
      else
        lo = mid;
    }
    mpq_class midq = (lo + hi) / 2;
    out.push_back(midq.get_d());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> real_roots_complex(const std::vector<Scalar>& coeffs) {
  UPolyQ re, im;
  for (auto& c : coeffs) {
    re.push_back(c.re_q());
    im.push_back(c.im_q());
  }
  trim(re);
  trim(im);
  UPolyQ g = im.empty() ? re : (re.empty() ? im : ugcd(re, im));
  require(!g.empty(), ErrorCode::invalid_argument, "zero polynomial has no finite root set");
  return real_roots(g);
}

std::vector<cplx> poly_roots(const std::vector<cplx>& c0) {
  std::vector<cplx> c = c0;
  while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
  require(!c.empty(), ErrorCode::invalid_argument, "zero polynomial has no finite root set");
  int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  require(es.info() == Eigen::Success, ErrorCode::numeric, "companion eigenvalue solver did not converge");
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
  for (auto& t : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx p = 0, dp = 0;
      for (int k = n; k >= 0; --k) {
        dp = dp * t + p;
        p = p * t + c[k];
      }
      if (std::abs(dp) == 0.0) break;
      cplx step = p / dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      t -= step;
    }
  }
  return roots;
}

}  // namespace ka
