#include "puiseux.hpp"

#include <algorithm>
#include <limits>

#include "univariate.hpp"

namespace ka {

namespace {

using CPoly = std::vector<cplx>;

cplx horner(const CPoly& p, cplx x) {
  cplx v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

CPoly padd(const CPoly& a, const CPoly& b, cplx cb = 1.0) {
  CPoly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += cb * b[i];
  return r;
}

CPoly pmul(const CPoly& a, const CPoly& b) {
  if (a.empty() || b.empty()) return {};
  CPoly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

CPoly derivative(const CPoly& p) {
  CPoly r;
  for (std::size_t i = 1; i < p.size(); ++i) r.push_back(static_cast<double>(i) * p[i]);
  return r;
}

double min_pairwise(const std::vector<cplx>& r) {
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) sep = std::min(sep, std::abs(r[i] - r[j]));
  return sep;
}

}  // namespace

SymbolPencil::SymbolPencil(const SlabDecomposition& dec) {
  require(dec.dim == 2, ErrorCode::precondition, "root tracking supports d = 2 only");
  for (int k = 0; k <= dec.m; ++k) {
    const MultiPoly& q = dec.q(k);
    CPoly c(static_cast<std::size_t>(std::max(q.degree(), 0)) + 1, 0.0);
    for (auto& [a, v] : q.terms()) c[static_cast<std::size_t>(a[0])] += v.to_complex();
    a_.push_back(c);
  }
}

std::vector<cplx> SymbolPencil::t_coeffs(cplx s) const {
  std::vector<cplx> c;
  for (auto& a : a_) c.push_back(horner(a, s));
  return c;
}

cplx SymbolPencil::value(cplx s, cplx t) const {
  cplx v = 0;
  for (auto it = a_.rbegin(); it != a_.rend(); ++it) v = v * t + horner(*it, s);
  return v;
}

double SymbolPencil::scale(cplx s, cplx t) const {
  double v = 0, tp = 1, at = std::abs(t);
  for (auto& a : a_) {
    v += std::abs(horner(a, s)) * tp;
    tp *= at;
  }
  return v;
}

cplx SymbolPencil::dt(cplx s, cplx t) const {
  cplx v = 0;
  for (int k = m(); k >= 1; --k) v = v * t + static_cast<double>(k) * horner(a_[k], s);
  return v;
}

cplx SymbolPencil::ds(cplx s, cplx t) const {
  cplx v = 0;
  for (auto it = a_.rbegin(); it != a_.rend(); ++it) v = v * t + horner(derivative(*it), s);
  return v;
}

std::vector<cplx> SymbolPencil::roots(cplx s) const {
  auto c = t_coeffs(s);
  if (m() == 1) return {-c[0] / c[1]};
  if (m() == 2) {
    cplx b = c[1] / c[2], q = c[0] / c[2];
    cplx disc = std::sqrt(b * b - 4.0 * q);
    // avoid cancellation: the larger root first, then Vieta
    cplx r1 = (std::abs(-b + disc) >= std::abs(-b - disc) ? -b + disc : -b - disc) / 2.0;
    cplx r2 = r1 == cplx(0) ? cplx(0) : q / r1;
    return {r1, r2};
  }
  return poly_roots(c);
}

std::vector<cplx> SymbolPencil::discriminant() const {
  int n = m();
  require(n <= 3, ErrorCode::precondition, "branch-point analysis supports m <= 3");
  if (n == 1) return {};
  if (n == 2) {
    // monic: a1^2 - 4 a0
    return padd(pmul(a_[1], a_[1]), a_[0], -4.0);
  }
  const CPoly &b = a_[2], &c = a_[1], &d = a_[0];
  CPoly bc = pmul(b, c), bb = pmul(b, b), cc = pmul(c, c), dd = pmul(d, d);
  CPoly r = pmul(bb, cc);
  r = padd(r, pmul(cc, c), -4.0);
  r = padd(r, pmul(pmul(bb, b), d), -4.0);
  r = padd(r, dd, -27.0);
  r = padd(r, pmul(bc, d), 18.0);
  return r;
}

RootTrack::RootTrack(const SymbolPencil* pencil, Path path, double u_anchor, cplx t_anchor, double u_lo,
                     double u_hi)
    : pencil_(pencil), path_(std::move(path)), u_lo_(u_lo), u_hi_(u_hi) {
  require(u_lo <= u_anchor && u_anchor <= u_hi, ErrorCode::invalid_argument, "anchor outside the track range");
  cplx s0 = path_(u_anchor);
  auto r0 = pencil_->roots(s0);
  u_ = {u_anchor};
  t_ = {t_anchor};
  sep_ = {min_pairwise(r0)};
  max_res_ = std::abs(pencil_->value(s0, t_anchor)) / std::max(pencil_->scale(s0, t_anchor), 1e-300);
  extend(u_hi);
  extend(u_lo);
}

void RootTrack::extend(double u_end) {
  // walk outward from the anchor (the first sample) toward u_end
  double dir = u_end >= u_.front() ? 1.0 : -1.0;
  std::vector<double> uu{u_.front()};
  std::vector<cplx> tt{t_.front()};
  std::vector<double> ss{sep_.front()};
  double u = u_.front();
  cplx t = t_.front();
  double sep = sep_.front();
  double h = 1e-3 * (1 + std::abs(u));
  while (dir * (u_end - u) > 0) {
    h = std::min(h, dir * (u_end - u));
    double un = u + dir * h;
    if (dir * (u_end - un) < 1e-12 * (1 + std::abs(u_end))) un = u_end;
    cplx s = path_(u), sn = path_(un);
    bool ok = std::abs(sn - s) <= 0.5 * std::max(std::abs(s), 1.0);
    cplx best = 0;
    double sepn = 0;
    if (ok) {
      cplx pd = pencil_->dt(s, t);
      cplx pred = t - pencil_->ds(s, t) / pd * (sn - s);
      auto r = pencil_->roots(sn);
      sepn = min_pairwise(r);
      best = r[0];
      for (auto& c : r)
        if (std::abs(c - pred) < std::abs(best - pred)) best = c;
      double lim = std::min(sep, sepn);
      ok = std::abs(best - pred) < 0.25 * lim && std::abs(best - t) < 0.5 * lim;
    }
    if (!ok) {
      h /= 2;
      if (h < 1e-13 * (1 + std::abs(u))) {
        cplx sb = path_(u);
        fail(ErrorCode::numeric, "root collision while tracking near s = (" + format_double(sb.real()) + ", " +
                                     format_double(sb.imag()) + ")");
      }
      continue;
    }
    u = un;
    t = best;
    sep = sepn;
    uu.push_back(u);
    tt.push_back(t);
    ss.push_back(sep);
    max_res_ = std::max(max_res_, std::abs(pencil_->value(sn, t)) / std::max(pencil_->scale(sn, t), 1e-300));
    h *= 2;
  }
  if (dir > 0) {
    u_.insert(u_.end(), uu.begin() + 1, uu.end());
    t_.insert(t_.end(), tt.begin() + 1, tt.end());
    sep_.insert(sep_.end(), ss.begin() + 1, ss.end());
  } else {
    u_.insert(u_.begin(), uu.rbegin(), uu.rend() - 1);
    t_.insert(t_.begin(), tt.rbegin(), tt.rend() - 1);
    sep_.insert(sep_.begin(), ss.rbegin(), ss.rend() - 1);
  }
}

double RootTrack::min_separation() const {
  double v = std::numeric_limits<double>::infinity();
  for (double s : sep_) v = std::min(v, s);
  return v;
}

cplx RootTrack::t(double u) const { return t_at(u, path_(u)); }

cplx RootTrack::t_at(double u, cplx s) const {
  require(u >= u_lo_ - 1e-12 * (1 + std::abs(u_lo_)) && u <= u_hi_ + 1e-12 * (1 + std::abs(u_hi_)),
          ErrorCode::invalid_argument, "point outside the tracked range");
  auto it = std::lower_bound(u_.begin(), u_.end(), u);
  std::size_t k = static_cast<std::size_t>(it - u_.begin());
  if (k == u_.size() || (k > 0 && u - u_[k - 1] < u_[k] - u)) --k;
  cplx t0 = t_[k], t = t0;
  for (int it2 = 0; it2 < 60; ++it2) {
    cplx step = pencil_->value(s, t) / pencil_->dt(s, t);
    t -= step;
    if (std::abs(step) <= 1e-15 * (1 + std::abs(t))) break;
  }
  if (!(std::abs(t - t0) < 0.5 * sep_[k]))
    fail(ErrorCode::numeric, "branch jump while evaluating the tracked root");
  double res = std::abs(pencil_->value(s, t)) / std::max(pencil_->scale(s, t), 1e-300);
  if (!(res <= 1e-10)) fail(ErrorCode::numeric, "root residual above 1e-10 of scale");
  return t;
}

BranchPointInfo branch_points(const SlabDecomposition& dec) {
  BranchPointInfo info;
  auto np = newton_polygon_at_infinity(dec);
  info.p = np.p;
  info.max_slope = np.max_slope;
  SymbolPencil pencil(dec);
  auto disc = pencil.discriminant();
  if (disc.empty()) return info;
  double big = 0;
  for (auto& c : disc) big = std::max(big, std::abs(c));
  require(big > 0, ErrorCode::precondition, "P(s e1 + t e2) has a repeated factor in t");
  while (!disc.empty() && std::abs(disc.back()) <= 1e-14 * big) disc.pop_back();
  info.discriminant_roots = poly_roots(disc);
  double R = 0;
  for (auto& r : info.discriminant_roots) R = std::max(R, std::abs(r));
  info.M = std::pow(R, 1.0 / info.p);
  return info;
}

std::vector<cplx> anchor_roots(const SymbolPencil& pencil, double tau) {
  auto r = pencil.roots(cplx(0, tau));
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return r;
}

PuiseuxBranch::PuiseuxBranch(const SlabDecomposition& dec, int branch_index, double tau, double sigma_max)
    : pencil_(std::make_shared<SymbolPencil>(dec)), index_(branch_index), tau_(tau) {
  info_ = branch_points(dec);
  require(tau > info_.tau_min(), ErrorCode::precondition,
          "tau = " + format_double(tau) + " does not exceed (2M)^p = " + format_double(info_.tau_min()));
  require(sigma_max > 0, ErrorCode::invalid_argument, "sigma_max must be positive");
  auto r = anchor_roots(*pencil_, tau);
  require(branch_index >= 0 && branch_index < static_cast<int>(r.size()), ErrorCode::invalid_argument,
          "branch index out of range");
  anchor_ = r[static_cast<std::size_t>(branch_index)];
  track_ = RootTrack(
      pencil_.get(), [tau](double u) { return cplx(u, tau); }, 0.0, anchor_, -sigma_max, sigma_max);
}

cplx PuiseuxBranch::leading_coefficient() const {
  cplx s(sigma_max(), tau_);
  return t(sigma_max()) / std::pow(s, info_.max_slope);
}

nlohmann::json PuiseuxBranch::to_json() const {
  nlohmann::json roots = nlohmann::json::array();
  for (auto& r : info_.discriminant_roots) roots.push_back({r.real(), r.imag()});
  cplx lc = leading_coefficient();
  return {{"p", info_.p},
          {"branch_index", index_},
          {"tau", tau_},
          {"sigma_max", sigma_max()},
          {"anchor", {anchor_.real(), anchor_.imag()}},
          {"M", info_.M},
          {"tau_min", info_.tau_min()},
          {"discriminant_roots", roots},
          {"leading_exponent", info_.max_slope},
          {"leading_coefficient", {lc.real(), lc.imag()}},
          {"track_samples", track_.size()},
          {"min_separation", track_.min_separation()},
          {"max_residual", track_.max_residual()}};
}

}  // namespace ka
