#include "slab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "univariate.hpp"

namespace ka {

std::size_t SlabDecomposition::hash() const {
  std::size_t h = original.hash();
  return h ^ (static_cast<std::size_t>(m) * 0x9e3779b97f4a7c15ull);
}

nlohmann::json SlabDecomposition::to_json() const {
  nlohmann::json qs = nlohmann::json::array();
  for (auto& p : Q) qs.push_back(p.to_string());
  return {{"dim", dim},
          {"m", m},
          {"lead", {{"re", lead.re_string()}, {"im", lead.im_string()}}},
          {"normalized", normalized},
          {"Q", qs}};
}

SlabDecomposition SlabDecomposition::to_mode(Mode md) const {
  if (md == mode()) return *this;
  SlabDecomposition r = *this;
  r.original = original.to_mode(md);
  r.lead = lead.to_mode(md);
  for (auto& q : r.Q) q = q.to_mode(md);
  return r;
}

SlabDecomposition slab_decompose(const MultiPoly& P, bool normalize) {
  require(P.dim() >= 2, ErrorCode::precondition, "slab decomposition needs d >= 2");
  int m = P.degree();
  require(m >= 1, ErrorCode::precondition, "slab decomposition needs deg P >= 1");
  int d = P.dim();
  MultiPoly top = P.coefficient_in(d - 1, m);
  if (top.degree() != 0) {
    Exponent ed(d, 0);
    ed[d - 1] = m;
    fail(ErrorCode::precondition, "e_d is characteristic: P_m(e_d) = " + P.coeff(ed).to_string());
  }
  SlabDecomposition dec;
  dec.dim = d;
  dec.m = m;
  dec.original = P;
  dec.lead = top.coeff(Exponent(d - 1, 0));
  dec.normalized = normalize;
  Scalar inv = normalize ? Scalar::one(P.mode()) / dec.lead : Scalar::one(P.mode());
  for (int k = 0; k <= m; ++k) dec.Q.push_back(P.coefficient_in(d - 1, k) * inv);
  return dec;
}

std::string verification_name(Verification v) {
  switch (v) {
    case Verification::exact_verified: return "exact-verified";
    case Verification::sampled_plausible: return "sampled-plausible";
    case Verification::failed: return "failed";
    default: return "unknown";
  }
}

double coefficient_sum(const MultiPoly& q) {
  double s = 0;
  for (auto& [a, c] : q.terms()) s += c.abs();
  return s;
}

bool HypothesisReport::all_hold() const {
  return e1_characteristic && ed_noncharacteristic && degx1_ok &&
         (single_direction == Verification::exact_verified ||
          single_direction == Verification::sampled_plausible) &&
         gamma_defined && gamma_value < 1.0;
}

nlohmann::json HypothesisReport::to_json() const {
  nlohmann::json j = {{"dim", dim},
                      {"degree", degree},
                      {"e1_characteristic", e1_characteristic},
                      {"ed_noncharacteristic", ed_noncharacteristic},
                      {"single_direction", verification_name(single_direction)},
                      {"characteristic_directions", characteristic_directions},
                      {"degx1_ok", degx1_ok},
                      {"q", q},
                      {"p", p},
                      {"all_hold", all_hold()},
                      {"notes", notes}};
  if (gamma_defined) {
    j["gamma"] = gamma_value;
    if (gamma != 0 || gamma_value == 0.0) j["gamma_exact"] = gamma.get_str();
    j["gamma_lt_1"] = gamma_value < 1.0;
  } else {
    j["gamma"] = nullptr;
  }
  return j;
}

std::vector<std::vector<double>> characteristic_directions_2d(const MultiPoly& P) {
  require(P.dim() == 2, ErrorCode::invalid_argument, "characteristic_directions_2d needs d = 2");
  require(P.mode() == Mode::exact, ErrorCode::mode, "characteristic_directions_2d needs exact coefficients");
  MultiPoly pm = P.principal_part();
  int m = pm.degree();
  std::vector<std::vector<double>> dirs;
  if (m <= 0) return dirs;
  // P_m(1, t) = sum_k c_k t^k with c_k the coefficient of x1^{m-k} x2^k
  std::vector<Scalar> c(m + 1, Scalar::zero(Mode::exact));
  for (int k = 0; k <= m; ++k) c[k] = pm.coeff({m - k, k});
  for (double t : real_roots_complex(c)) {
    double n = std::hypot(1.0, t);
    dirs.push_back({1.0 / n, t / n});
  }
  if (c[m].is_zero()) dirs.push_back({0.0, 1.0});
  return dirs;
}

namespace {

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

bool near_e1(const std::vector<double>& v) {
  double off = 0;
  for (std::size_t k = 1; k < v.size(); ++k) off += v[k] * v[k];
  return std::sqrt(off) < 1e-8;
}

double abs_principal(const MultiPoly& pm, const std::vector<double>& x) {
  std::vector<cplx> z(x.begin(), x.end());
  return std::abs(pm.evaluate(z));
}

void normalize(std::vector<double>& x) {
  double n = 0;
  for (double v : x) n += v * v;
  n = std::sqrt(n);
  for (double& v : x) v /= n;
}

// crude search for real zeros of P_m on the unit sphere
std::vector<std::vector<double>> sampled_directions(const MultiPoly& pm, std::uint64_t seed) {
  int d = pm.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  int n = 2000 * d;
  std::vector<std::vector<double>> pts(n, std::vector<double>(d));
  double scale = 0;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    for (double& v : pts[i]) v = nd(rng);
    normalize(pts[i]);
    vals[i] = abs_principal(pm, pts[i]);
    scale = std::max(scale, vals[i]);
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
  std::vector<std::vector<double>> found;
  int tries = std::min(n, 40);
  for (int t = 0; t < tries; ++t) {
    auto x = pts[idx[t]];
    double fx = vals[idx[t]];
    for (double step = 0.1; step > 1e-13; step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int k = 0; k < d; ++k)
          for (double sgn : {1.0, -1.0}) {
            auto y = x;
            y[k] += sgn * step;
            normalize(y);
            double fy = abs_principal(pm, y);
            if (fy < fx) {
              x = y;
              fx = fy;
              improved = true;
            }
          }
      }
    }
    if (fx > 1e-9 * scale) continue;
    if (x[0] < 0 || (x[0] == 0 && x[1] < 0))
      for (double& v : x) v = -v;
    bool dup = false;
    for (auto& f : found) {
      double dot = 0;
      for (int k = 0; k < d; ++k) dot += f[k] * x[k];
      dup = dup || std::fabs(dot) > 1 - 1e-6;
    }
    if (!dup) found.push_back(x);
  }
  return found;
}

}  // namespace

NewtonPolygonInfo newton_polygon_at_infinity(const SlabDecomposition& dec) {
  std::vector<std::pair<int, int>> pts;  // (k, degree in s of Q_k(s,0..0))
  for (int k = 0; k <= dec.m; ++k) {
    MultiPoly r = dec.q(k);
    for (int j = 1; j < r.dim(); ++j) r = r.restrict_zero(j);
    if (!r.is_zero()) pts.emplace_back(k, r.degree());
  }
  // upper hull over increasing k
  std::vector<std::pair<int, int>> hull;
  for (auto& pt : pts) {
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull.back();
      long cross = static_cast<long>(b.first - a.first) * (pt.second - a.second) -
                   static_cast<long>(b.second - a.second) * (pt.first - a.first);
      if (cross >= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  NewtonPolygonInfo info;
  info.max_slope = -1e300;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    mpq_class lam(hull[i].second - hull[i + 1].second, hull[i + 1].first - hull[i].first);
    lam.canonicalize();
    info.slopes.push_back(lam);
    info.p = lcm_int(info.p, static_cast<int>(lam.get_den().get_si()));
    info.max_slope = std::max(info.max_slope, lam.get_d());
  }
  if (info.slopes.empty()) info.max_slope = 0.0;
  return info;
}

HypothesisReport hypotheses_report(const MultiPoly& P, std::uint64_t seed) {
  HypothesisReport rep;
  rep.dim = P.dim();
  rep.degree = P.degree();
  require(P.dim() >= 2, ErrorCode::invalid_argument, "hypotheses need d >= 2");
  require(P.degree() >= 1, ErrorCode::invalid_argument, "hypotheses need deg P >= 1");
  int d = P.dim();
  MultiPoly pm = P.principal_part();
  Exponent e1(d, 0), ed(d, 0);
  e1[0] = pm.degree();
  ed[d - 1] = pm.degree();
  rep.e1_characteristic = pm.coeff(e1).is_zero();
  rep.ed_noncharacteristic = !pm.coeff(ed).is_zero();

  if (d == 2 && P.mode() == Mode::exact) {
    rep.characteristic_directions = characteristic_directions_2d(P);
    bool ok = rep.characteristic_directions.size() == 1 && near_e1(rep.characteristic_directions[0]);
    rep.single_direction = ok ? Verification::exact_verified : Verification::failed;
  } else {
    rep.characteristic_directions = sampled_directions(pm, seed);
    bool any_other = false;
    for (auto& v : rep.characteristic_directions) any_other = any_other || !near_e1(v);
    if (any_other)
      rep.single_direction = Verification::failed;
    else if (rep.e1_characteristic)
      rep.single_direction = Verification::sampled_plausible;
    else
      rep.single_direction = Verification::failed;
    rep.notes.push_back("single-direction check is a sampled heuristic (d >= 3 or float coefficients)");
  }

  if (rep.ed_noncharacteristic) {
    SlabDecomposition dec = slab_decompose(P);
    rep.degx1_ok = true;
    mpq_class g = 0;
    for (int k = 0; k < dec.m; ++k) {
      const MultiPoly& qk = dec.q(k);
      if (qk.is_zero()) continue;
      rep.q = std::max(rep.q, coefficient_sum(qk));
      rep.degx1_ok = rep.degx1_ok && qk.degree_in(0) < dec.m - k;
      mpq_class r(qk.degree_in(0), dec.m - k);
      r.canonicalize();
      if (r > g) g = r;
    }
    rep.gamma_defined = rep.degx1_ok;
    rep.gamma = g;
    rep.gamma_value = g.get_d();
    rep.p = newton_polygon_at_infinity(dec).p;
    if (!rep.degx1_ok) rep.notes.push_back("deg_x1 Q_k >= m - k for some k; gamma undefined");
  } else {
    rep.notes.push_back("e_d is characteristic; slab decomposition and gamma undefined");
  }
  return rep;
}

}  // namespace ka
