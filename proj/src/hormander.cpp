#include "hormander.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

namespace ka {

namespace {

const cplx I(0, 1);
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTrackCap = 1e7;
constexpr double kParabolaCap = 400;

// exp(i x sigma) with the rounding error of the product x * sigma folded
// back in; the phase reaches 1e5 on long contours
cplx cis_product(double x, double sigma) {
  double p = x * sigma;
  double e = std::fma(x, sigma, -p);
  return cplx(std::cos(p), std::sin(p)) * cplx(1.0, e);
}

// exp(i (x1 s + x2 t)) for s = sigma + i tau
cplx kernel(double x1, double x2, double sigma, double tau, cplx t) {
  return cis_product(x1, sigma) * std::exp(-x1 * tau + I * (x2 * t));
}

}  // namespace

int Grid2::n1() const { return static_cast<int>(std::floor((x1max - x1min) / h + 0.5)) + 1; }
int Grid2::n2() const { return static_cast<int>(std::floor((x2max - x2min) / h + 0.5)) + 1; }

Grid2 Grid2::parse(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::invalid_argument, "bad grid field \"" + item + "\" in \"" + text + "\"");
    }
  }
  require(v.size() == 5, ErrorCode::invalid_argument, "grid needs X1MIN:X1MAX:X2MIN:X2MAX:H, got \"" + text + "\"");
  Grid2 g{v[0], v[1], v[2], v[3], v[4]};
  require(g.h > 0 && g.x1max >= g.x1min && g.x2max >= g.x2min, ErrorCode::invalid_argument,
          "grid needs h > 0 and nonempty ranges");
  return g;
}

nlohmann::json Grid2::to_json() const {
  return {{"x1", {x1min, x1max}}, {"x2", {x2min, x2max}}, {"h", h}, {"n1", n1()}, {"n2", n2()}};
}

Grid2 Grid2::from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse(j.get<std::string>());
  Grid2 g{j.at("x1").at(0).get<double>(), j.at("x1").at(1).get<double>(), j.at("x2").at(0).get<double>(),
          j.at("x2").at(1).get<double>(), j.at("h").get<double>()};
  require(g.h > 0, ErrorCode::invalid_argument, "grid needs h > 0");
  return g;
}

double Field::max_abs() const {
  double m = 0;
  for (auto& v : value) m = std::max(m, std::abs(v));
  return m;
}

std::string Field::to_csv() const {
  std::string out = "x1,x2,re,im,err\n";
  for (int i = 0; i < grid.n1(); ++i)
    for (int j = 0; j < grid.n2(); ++j) {
      cplx v = at(i, j);
      out += format_double(grid.x1(i)) + "," + format_double(grid.x2(j)) + "," + format_double(v.real()) + "," +
             format_double(v.imag()) + "," + format_double(err(i, j)) + "\n";
    }
  return out;
}

std::string Field::to_matrix() const {
  std::string out;
  for (int j = 0; j < grid.n2(); ++j) {
    for (int i = 0; i < grid.n1(); ++i) {
      if (i) out += ' ';
      out += format_double(std::abs(at(i, j)));
    }
    out += '\n';
  }
  return out;
}

struct NodeSet {
  std::vector<cplx> s, t, w, wd;
  std::size_t panels = 0;
  double sigma_max = 0, tail = 0;
};

bool HormanderV::Box::operator<(const Box& o) const {
  return std::tie(x1lo, x1hi, x2lo, x2hi, a1, a2) < std::tie(o.x1lo, o.x1hi, o.x2lo, o.x2hi, o.a1, o.a2);
}

HormanderV::HormanderV(const SlabDecomposition& dec, ContourSpec spec) : dec_(dec), spec_(spec) {
  require(dec.dim == 2, ErrorCode::precondition, "the null solution is implemented for d = 2");
  if (dec.mode() == Mode::exact) dec_ = dec.to_mode(Mode::floating);
  auto bp = branch_points(dec_);
  require(spec_.r < 1 && spec_.r > 1 - 1.0 / bp.p, ErrorCode::precondition,
          "r must satisfy 1 - 1/p < r < 1 with p = " + std::to_string(bp.p));
  require(bp.max_slope < spec_.r, ErrorCode::precondition,
          "decay precheck failed: branch growth exponent " + format_double(bp.max_slope) + " is not below r");
  if (spec_.tau <= 0) spec_.tau = std::max(1.0, 2 * bp.tau_min());
  cap_ = std::max(kTrackCap, 4 * spec_.sigma_max);
  branch_ = std::make_unique<PuiseuxBranch>(dec_, spec_.branch, spec_.tau, cap_);
  for (auto& r : bp.discriminant_roots) disc_radius_ = std::max(disc_radius_, std::abs(r));
}

HormanderV::~HormanderV() = default;

std::shared_ptr<const NodeSet> HormanderV::nodes(const Box& box) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(box);
    if (it != cache_.end()) return it->second;
  }
  auto ns = build_nodes(box);
  std::lock_guard<std::mutex> lock(mu_);
  if (cache_.size() > 64) cache_.clear();
  cache_[box] = ns;
  last_info_ = {{"tau", spec_.tau},          {"r", spec_.r},
                {"sigma_max", ns->sigma_max}, {"tail", ns->tail},
                {"panels", ns->panels},       {"nodes", ns->s.size()},
                {"branch", branch_->to_json()}};
  return ns;
}

std::shared_ptr<const NodeSet> HormanderV::build_nodes(const Box& box) const {
  const double tau = spec_.tau, r = spec_.r;
  const SymbolPencil& pencil = branch_->pencil();
  const double X1 = std::max(std::abs(box.x1lo), std::abs(box.x1hi));
  const double X2 = std::max(std::abs(box.x2lo), std::abs(box.x2hi));
  auto logenv = [&](double sg) {
    cplx s(sg, tau), t = branch_->t(sg), w = -I * s;
    double L = -std::pow(w, r).real() + std::max(-box.x2lo * t.imag(), -box.x2hi * t.imag()) - box.x1lo * tau;
    if (box.a1) L += box.a1 * std::log(std::abs(s));
    if (box.a2) L += box.a2 * std::log(std::abs(t));
    return L;
  };
  auto right = [&](double sg) { return logenv(sg); };
  auto left = [&](double sg) { return logenv(-sg); };
  const double x0 = std::max(1.0, 2 * tau);
  auto ns = std::make_shared<NodeSet>();
  if (spec_.sigma_max > 0) {
    ns->sigma_max = spec_.sigma_max;
    ns->tail = envelope_tail(right, ns->sigma_max, cap_) + envelope_tail(left, ns->sigma_max, cap_);
    if (!(ns->tail <= spec_.tol))
      fail(ErrorCode::numeric, "tail estimate " + format_double(ns->tail) + " above tolerance at sigma_max = " +
                                   format_double(ns->sigma_max));
  } else {
    auto tr = choose_truncation(right, x0, cap_, spec_.tol / 2);
    auto tl = choose_truncation(left, x0, cap_, spec_.tol / 2);
    if (!tr.ok || !tl.ok)
      fail(ErrorCode::numeric, "decay failure: integrand envelope not below tolerance by sigma = " +
                                   format_double(cap_));
    ns->sigma_max = std::max(tr.x, tl.x);
    ns->tail = envelope_tail(right, ns->sigma_max, cap_) + envelope_tail(left, ns->sigma_max, cap_);
  }
  const double smax = ns->sigma_max;

  auto panel_len = [&](double sg) {
    cplx s(sg, tau), t = branch_->t_at(sg, s), w = -I * s;
    cplx tp = -pencil.ds(s, t) / pencil.dt(s, t);
    double om = X1 + X2 * std::abs(tp) + r * std::pow(std::abs(w), r - 1);
    if (box.a1) om += box.a1 / std::abs(s);
    if (box.a2) om += box.a2 * std::abs(tp) / std::max(std::abs(t), 1e-300);
    return std::min(spec_.panel_phase / om, 0.5 * std::max(std::abs(s), 1.0));
  };
  std::vector<Panel> rightp, leftp;
  for (double sg = 0; sg < smax;) {
    double L = panel_len(sg), b = std::min(sg + L, smax);
    if (smax - b < 0.1 * L) b = smax;
    rightp.push_back({sg, b});
    sg = b;
  }
  for (double sg = 0; sg < smax;) {
    double L = panel_len(-sg), b = std::min(sg + L, smax);
    if (smax - b < 0.1 * L) b = smax;
    leftp.push_back({-b, -sg});
    sg = b;
  }
  std::vector<Panel> panels(leftp.rbegin(), leftp.rend());
  panels.insert(panels.end(), rightp.begin(), rightp.end());

  const GKRule& gk = gk61();
  auto fill = [&](const Panel& p, cplx* s, cplx* t, cplx* w, cplx* wd) {
    double c = 0.5 * (p.a + p.b), hl = 0.5 * (p.b - p.a);
    for (int j = 0; j < 61; ++j) {
      double sg = c + hl * gk.x[j];
      s[j] = cplx(sg, tau);
      t[j] = branch_->t_at(sg, s[j]);
      cplx base = std::exp(-std::pow(-I * s[j], r));
      if (box.a1) base *= std::pow(s[j], box.a1);
      if (box.a2) base *= std::pow(t[j], box.a2);
      w[j] = hl * gk.wk[j] * base;
      wd[j] = hl * (gk.wk[j] - gk.wg[j]) * base;
    }
  };
  const double probes[5][2] = {{box.x1lo, box.x2lo},
                               {box.x1lo, box.x2hi},
                               {box.x1hi, box.x2lo},
                               {box.x1hi, box.x2hi},
                               {0.5 * (box.x1lo + box.x1hi), 0.5 * (box.x2lo + box.x2hi)}};
  auto needs_split = [&](const Panel& p) {
    cplx s[61], t[61], w[61], wd[61];
    fill(p, s, t, w, wd);
    // rounding in exp() grows with the size of the exponent
    double phase = 0;
    for (int j = 0; j < 61; ++j) phase = std::max(phase, X2 * std::abs(t[j]) + std::pow(std::abs(s[j]), r));
    for (auto& pr : probes) {
      cplx D = 0;
      double A = 0;
      for (int j = 0; j < 61; ++j) {
        cplx e = kernel(pr[0], pr[1], s[j].real(), tau, t[j]);
        D += wd[j] * e;
        A += std::abs(w[j] * e);
      }
      if (std::abs(D) > std::max(spec_.tol * (p.b - p.a) / (2 * smax), kEps * A * (32 + phase))) return true;
    }
    return false;
  };
  panels = refine_panels(panels, needs_split);
  ns->panels = panels.size();
  std::size_t n = panels.size() * 61;
  ns->s.resize(n);
  ns->t.resize(n);
  ns->w.resize(n);
  ns->wd.resize(n);
  for (std::size_t p = 0; p < panels.size(); ++p)
    fill(panels[p], &ns->s[p * 61], &ns->t[p * 61], &ns->w[p * 61], &ns->wd[p * 61]);
  return ns;
}

std::vector<Estimate> HormanderV::evaluate(const std::vector<std::array<double, 2>>& points,
                                           std::array<int, 2> alpha) const {
  if (points.empty()) return {};
  require(alpha[0] >= 0 && alpha[1] >= 0, ErrorCode::invalid_argument, "negative derivative order");
  Box box{points[0][0], points[0][0], points[0][1], points[0][1], alpha[0], alpha[1]};
  for (auto& p : points) {
    box.x1lo = std::min(box.x1lo, p[0]);
    box.x1hi = std::max(box.x1hi, p[0]);
    box.x2lo = std::min(box.x2lo, p[1]);
    box.x2hi = std::max(box.x2hi, p[1]);
  }
  auto ns = nodes(box);
  std::vector<Estimate> out(points.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    double x1 = points[q][0], x2 = points[q][1];
    cplx v = 0;
    double err = 0, A = 0;
    for (std::size_t p = 0; p < ns->panels; ++p) {
      cplx K = 0, D = 0;
      for (std::size_t j = p * 61; j < p * 61 + 61; ++j) {
        cplx e = kernel(x1, x2, ns->s[j].real(), spec_.tau, ns->t[j]);
        K += ns->w[j] * e;
        D += ns->wd[j] * e;
        A += std::abs(ns->w[j] * e);
      }
      v += K;
      err += std::abs(D);
    }
    out[q] = {v, err + 4 * kEps * A + ns->tail};
  }
  return out;
}

Estimate HormanderV::evaluate(double x1, double x2, std::array<int, 2> alpha) const {
  return evaluate(std::vector<std::array<double, 2>>{{x1, x2}}, alpha)[0];
}

Field HormanderV::sample(const Grid2& grid, std::array<int, 2> alpha) const {
  const int n1 = grid.n1(), n2 = grid.n2();
  Box box{grid.x1(0), grid.x1(n1 - 1), grid.x2(0), grid.x2(n2 - 1), alpha[0], alpha[1]};
  auto ns = nodes(box);
  const double tau = spec_.tau;
  Field f;
  f.grid = grid;
  f.value.assign(static_cast<std::size_t>(n1) * n2, 0.0);
  f.error.assign(f.value.size(), 0.0);

  auto work = [&](int r0, int r1) {
    const int rows = r1 - r0;
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(rows, n2);
    Eigen::MatrixXd Err = Eigen::MatrixXd::Zero(rows, n2);
    Eigen::VectorXd Abs = Eigen::VectorXd::Zero(n2);
    Eigen::MatrixXcd E1(rows, 61), F(rows, 61), FD(rows, 61), E2(61, n2);
    for (std::size_t p = 0; p < ns->panels; ++p) {
      std::size_t off = p * 61;
      for (int j = 0; j < 61; ++j) {
        cplx t = ns->t[off + j];
        double wabs = std::abs(ns->w[off + j]);
        for (int b = 0; b < n2; ++b) {
          cplx e = std::exp(I * grid.x2(b) * t);
          E2(j, b) = e;
          Abs(b) += wabs * std::abs(e);
        }
        double sg = ns->s[off + j].real();
        for (int a = 0; a < rows; ++a) {
          cplx e = cis_product(grid.x1(r0 + a), sg);
          F(a, j) = e * ns->w[off + j];
          FD(a, j) = e * ns->wd[off + j];
        }
      }
      V.noalias() += F * E2;
      Err += (FD * E2).cwiseAbs();
    }
    for (int a = 0; a < rows; ++a) {
      double sc = std::exp(-grid.x1(r0 + a) * tau);
      for (int b = 0; b < n2; ++b) {
        std::size_t k = f.index(r0 + a, b);
        f.value[k] = V(a, b) * sc;
        f.error[k] = Err(a, b) * sc + 4 * kEps * sc * Abs(b) + ns->tail;
      }
    }
  };
  int threads = std::max(1, std::min(spec_.threads, n1));
  if (threads == 1) {
    work(0, n1);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(work, n1 * k / threads, n1 * (k + 1) / threads);
    for (auto& th : pool) th.join();
  }
  return f;
}

double HormanderV::mu_candidate(std::size_t i) const {
  double mu0 = std::max(0.25, 1.5 * disc_radius_ + 0.25);
  return mu0 * std::pow(1.25, static_cast<double>(i));
}

const RootTrack& HormanderV::parabola(std::size_t i) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = parabolas_.find(i);
  if (it != parabolas_.end()) return *it->second;
  const double mu = mu_candidate(i), tau = spec_.tau;
  const SymbolPencil* pencil = &branch_->pencil();
  cplx tmu = branch_->anchor();
  if (std::abs(mu - tau) > 1e-14 * tau) {
    RootTrack seg(
        pencil, [](double y) { return cplx(0, y); }, tau, branch_->anchor(), std::min(tau, mu), std::max(tau, mu));
    tmu = seg.t(mu);
  }
  auto tr = std::make_unique<RootTrack>(
      pencil, [mu](double u) { return cplx(2 * mu * u, mu * (1 - u * u)); }, 0.0, tmu, -kParabolaCap, kParabolaCap);
  return *(parabolas_[i] = std::move(tr));
}

std::vector<Estimate> HormanderV::trace_k(double x1, int k, int jmax) const {
  const double T = -x1, r = spec_.r;
  // log |integrand| on the parabola with vertex i mu
  auto logF = [&](const RootTrack& tr, double mu, double u) {
    cplx s = tr.s(u), t = tr.t_at(u, s), w = -I * s;
    double L = T * s.imag() - std::pow(w, r).real() + std::log(2 * mu * std::hypot(1.0, u));
    if (k) L += k * std::log(std::abs(s));
    if (jmax) L += jmax * std::log(std::abs(t));
    return L;
  };
  double best = std::numeric_limits<double>::infinity();
  std::size_t bi = 0;
  auto range = [&](double mu) { return std::min(kParabolaCap, 2 * std::sqrt(1 + (k + jmax + 60) / (T * mu))); };
  for (std::size_t i = 0; mu_candidate(i) < 1e5; ++i) {
    double mu = mu_candidate(i), U = range(mu);
    const RootTrack& tr = parabola(i);
    double M = -std::numeric_limits<double>::infinity();
    for (int q = -150; q <= 150; ++q) M = std::max(M, logF(tr, mu, U * q / 150.0));
    if (M < best) {
      best = M;
      bi = i;
    }
  }
  const double mu = mu_candidate(bi);
  const RootTrack& tr = parabola(bi);
  // integration range: out to the last sample within 45 of the peak, then until it drops below
  const double du = range(mu) / 150.0;
  double ends[2] = {0, 0};
  double tail = 0;
  for (int side = 0; side < 2; ++side) {
    double sgn = side ? 1.0 : -1.0, u = 0;
    for (int q = 1; q <= 150; ++q)
      if (logF(tr, mu, sgn * q * du) > best - 45) u = q * du;
    while (u < kParabolaCap && logF(tr, mu, sgn * u) > best - 45) u = std::min(kParabolaCap, u + du);
    ends[side] = sgn * u;
    tail += std::exp(logF(tr, mu, sgn * u)) * std::max(u, 1.0);
  }
  const GKRule& gk = gk61();
  const std::size_t nj = static_cast<std::size_t>(jmax) + 1;
  auto panel_sums = [&](const Panel& p, std::vector<cplx>& K, std::vector<cplx>& D, double& A) {
    K.assign(nj, 0.0);
    D.assign(nj, 0.0);
    A = 0;
    double c = 0.5 * (p.a + p.b), hl = 0.5 * (p.b - p.a);
    for (int j = 0; j < 61; ++j) {
      double u = c + hl * gk.x[j];
      cplx s = tr.s(u), t = tr.t_at(u, s), w = -I * s;
      cplx sp = 2 * mu * cplx(1, -u);
      cplx lg = I * x1 * s - std::pow(w, r) + std::log(sp);
      if (k) lg += static_cast<double>(k) * std::log(I * s);
      cplx F = std::exp(lg);
      for (std::size_t q = 0; q < nj; ++q) {
        K[q] += hl * gk.wk[j] * F;
        D[q] += hl * (gk.wk[j] - gk.wg[j]) * F;
        A += std::abs(hl * gk.wk[j] * F);
        F *= t;
      }
    }
  };
  const double span = ends[1] - ends[0];
  const double scale = std::exp(best);
  std::vector<Panel> init;
  for (int q = 0; q < 16; ++q) init.push_back({ends[0] + span * q / 16, ends[0] + span * (q + 1) / 16});
  auto needs_split = [&](const Panel& p) {
    std::vector<cplx> K, D;
    double A;
    panel_sums(p, K, D, A);
    double thr = std::max(2 * kEps * scale * (p.b - p.a), 8 * kEps * A);
    for (auto& d : D)
      if (std::abs(d) > thr) return true;
    return false;
  };
  auto panels = refine_panels(init, needs_split);
  std::vector<Estimate> out(nj);
  double A_tot = 0;
  for (auto& p : panels) {
    std::vector<cplx> K, D;
    double A;
    panel_sums(p, K, D, A);
    A_tot += A;
    for (std::size_t q = 0; q < nj; ++q) {
      out[q].value += K[q];
      out[q].error += std::abs(D[q]);
    }
  }
  for (auto& e : out) e.error += 4 * kEps * A_tot + tail;
  return out;
}

std::vector<std::vector<Estimate>> HormanderV::trace_jet(double x1, int kmax, int jmax) const {
  require(kmax >= 0 && jmax >= 0, ErrorCode::invalid_argument, "negative derivative order");
  std::vector<std::vector<Estimate>> out(static_cast<std::size_t>(jmax) + 1,
                                         std::vector<Estimate>(static_cast<std::size_t>(kmax) + 1));
  for (int k = 0; k <= kmax; ++k) {
    if (x1 < 0) {
      auto col = trace_k(x1, k, jmax);
      for (int j = 0; j <= jmax; ++j) out[j][k] = col[j];
    } else {
      // d1^k = i^k D1^k
      cplx ik = std::pow(I, k);
      for (int j = 0; j <= jmax; ++j) {
        auto e = evaluate(x1, 0.0, {k, j});
        out[j][k] = {ik * e.value, e.error};
      }
    }
  }
  return out;
}

nlohmann::json HormanderV::info() const {
  std::lock_guard<std::mutex> lock(mu_);
  nlohmann::json j = last_info_;
  if (j.is_null()) j = {{"tau", spec_.tau}, {"r", spec_.r}, {"branch", branch_->to_json()}};
  return j;
}

namespace {

// Fornberg weights for the q-th derivative at 0 on the nodes -K..K.
std::vector<double> central_weights(int q) {
  int K = (q + 1) / 2;
  int n = 2 * K + 1;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i - K;
  std::vector<std::vector<std::vector<double>>> c(
      q + 1, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  c[0][0][0] = 1;
  double c1 = 1;
  for (int i = 1; i < n; ++i) {
    double c2 = 1;
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      for (int mm = 0; mm <= std::min(i, q); ++mm) {
        double prev = mm > 0 ? c[mm - 1][i - 1][j] : 0.0;
        c[mm][i][j] = (x[i] * c[mm][i - 1][j] - mm * prev) / c3;
      }
    }
    for (int mm = 0; mm <= std::min(i, q); ++mm) {
      double prev = mm > 0 ? c[mm - 1][i - 1][i - 1] : 0.0;
      c[mm][i][i] = c1 / c2 * (mm * prev - x[i - 1] * c[mm][i - 1][i - 1]);
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[q][n - 1][j];
  return w;
}

}  // namespace

Field fd_residual(const MultiPoly& P, const Field& f) {
  require(P.dim() == 2, ErrorCode::invalid_argument, "fd_residual needs a two-variable symbol");
  int K1 = 0, K2 = 0;
  for (auto& [a, c] : P.terms()) {
    K1 = std::max(K1, (a[0] + 1) / 2);
    K2 = std::max(K2, (a[1] + 1) / 2);
  }
  const Grid2& g = f.grid;
  int n1 = g.n1(), n2 = g.n2();
  require(n1 > 2 * K1 && n2 > 2 * K2, ErrorCode::invalid_argument, "grid too small for the stencils");
  Field r;
  r.grid = {g.x1(K1), g.x1(n1 - 1 - K1), g.x2(K2), g.x2(n2 - 1 - K2), g.h};
  r.value.assign(static_cast<std::size_t>(r.grid.n1()) * r.grid.n2(), 0.0);
  r.error.assign(r.value.size(), 0.0);
  for (auto& [a, c] : P.terms()) {
    auto w1 = central_weights(a[0]), w2 = central_weights(a[1]);
    int k1 = (a[0] + 1) / 2, k2 = (a[1] + 1) / 2;
    // P(D) = sum c_a (-i)^{|a|} d^a
    cplx coef = c.to_complex() * std::pow(cplx(0, -1), a[0] + a[1]) / std::pow(g.h, a[0] + a[1]);
    for (int i = 0; i < r.grid.n1(); ++i)
      for (int j = 0; j < r.grid.n2(); ++j) {
        cplx acc = 0;
        double eacc = 0;
        for (int p = -k1; p <= k1; ++p)
          for (int q = -k2; q <= k2; ++q) {
            double w = w1[p + k1] * w2[q + k2];
            if (w == 0) continue;
            acc += w * f.at(i + K1 + p, j + K2 + q);
            eacc += std::abs(w) * f.err(i + K1 + p, j + K2 + q);
          }
        r.value[r.index(i, j)] += coef * acc;
        r.error[r.index(i, j)] += std::abs(coef) * eacc;
      }
  }
  return r;
}

}  // namespace ka
