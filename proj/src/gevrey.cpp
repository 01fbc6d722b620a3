#include "gevrey.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "error.hpp"
#include "jet.hpp"

namespace ka {

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

template <class T>
std::vector<double> bump_jet(double y, int order, double rho, double Z) {
  std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
  if (std::fabs(y) >= 1.0) return out;
  T yy(y);
  auto Y = Jet<T>::variable(yy, order);
  auto u = T(1) - Y * Y;
  T expo = T(-1) / (T(rho) - T(1));
  auto w = pow(u, expo);
  auto phi = exp(-w);
  T fact(1);
  for (int k = 0; k <= order; ++k) {
    if (k > 1) fact *= T(k);
    out[k] = static_cast<double>(phi.coeff(k) * fact / T(Z));
  }
  return out;
}

}  // namespace

GevreyBump::GevreyBump(double rho, JetPrecision prec) : rho_(rho), prec_(prec) {
  require(rho > 1.0, ErrorCode::invalid_argument, "Gevrey class rho must exceed 1");
  double s = 1.0 / (rho - 1.0);
  auto f = [s](double y) {
    double u = 1.0 - y * y;
    return u <= 0 ? 0.0 : std::exp(-std::pow(u, -s));
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  Z_ = ts.integrate(f, -1.0, 1.0);
  require(Z_ > 0 && std::isfinite(Z_), ErrorCode::numeric, "bump normalization failed");
}

double GevreyBump::value(double y) const {
  if (std::fabs(y) >= 1.0) return 0.0;
  double u = 1.0 - y * y;
  return std::exp(-std::pow(u, -1.0 / (rho_ - 1.0))) / Z_;
}

std::vector<double> GevreyBump::derivatives(double y, int order) const {
  require(order >= 0, ErrorCode::invalid_argument, "negative derivative order");
  if (prec_ == JetPrecision::decimal50) return bump_jet<big>(y, order, rho_, Z_);
  return bump_jet<double>(y, order, rho_, Z_);
}

double GevreyBump::cdf(double y) const {
  if (y <= -1.0) return 0.0;
  if (y >= 1.0) return 1.0;
  if (y > 0.0) return 1.0 - cdf(-y);
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([this](double t) { return value(t); }, -1.0, y);
}

CutoffSpec slab_cutoff_spec(double a, double eps, double rho, double margin_lo_frac,
                            double margin_hi_frac) {
  require(a > 0 && eps > 0 && eps < a, ErrorCode::invalid_argument, "slab needs 0 < eps < a");
  CutoffSpec c;
  c.plateau_lo = -a - margin_lo_frac * eps;
  c.plateau_hi = -eps + margin_hi_frac * eps;
  c.support_lo = -a - eps;
  c.support_hi = -eps / 2;
  c.rho = rho;
  return c;
}

GevreyCutoff::GevreyCutoff(const CutoffSpec& spec) : spec_(spec), bump_(spec.rho, spec.precision) {
  require(spec.support_lo < spec.plateau_lo && spec.plateau_lo < spec.plateau_hi &&
              spec.plateau_hi < spec.support_hi,
          ErrorCode::invalid_argument, "cutoff needs support_lo < plateau_lo < plateau_hi < support_hi");
  double gap = std::min(spec.plateau_lo - spec.support_lo, spec.support_hi - spec.plateau_hi);
  delta_ = spec.delta > 0 ? spec.delta : gap / 2;
  require(2 * delta_ <= gap * (1 + 1e-12), ErrorCode::invalid_argument,
          "cutoff delta too large for the support margins");
  c1_ = spec.plateau_lo - delta_;
  c2_ = spec.plateau_hi + delta_;
}

double GevreyCutoff::value(double x) const {
  return bump_.cdf((x - c1_) / delta_) - bump_.cdf((x - c2_) / delta_);
}

std::vector<double> GevreyCutoff::derivatives(double x, int order) const {
  std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
  out[0] = value(x);
  if (order == 0) return out;
  auto a = bump_.derivatives((x - c1_) / delta_, order - 1);
  auto b = bump_.derivatives((x - c2_) / delta_, order - 1);
  double scale = 1.0;
  for (int k = 1; k <= order; ++k) {
    scale /= delta_;
    out[k] = (a[k - 1] - b[k - 1]) * scale;
  }
  return out;
}

nlohmann::json GevreyCutoff::to_json() const {
  return {{"plateau", {spec_.plateau_lo, spec_.plateau_hi}},
          {"support_bound", {spec_.support_lo, spec_.support_hi}},
          {"support", {true_support_lo(), true_support_hi()}},
          {"rho", spec_.rho},
          {"delta", delta_},
          {"precision", spec_.precision == JetPrecision::decimal50 ? "decimal50" : "float64"}};
}

GevreyFit fit_gevrey_constants(const std::vector<double>& maxima, double rho) {
  require(!maxima.empty(), ErrorCode::invalid_argument, "no derivative maxima");
  GevreyFit fit;
  fit.rho = rho;
  double mx = *std::max_element(maxima.begin(), maxima.end());
  fit.C = maxima[0] > 0 ? maxima[0] : (mx > 0 ? mx : 1.0);
  double logC = std::log(fit.C);
  double logR = -1e300;
  for (std::size_t a = 1; a < maxima.size(); ++a) {
    if (maxima[a] <= 0) continue;
    double al = static_cast<double>(a);
    logR = std::max(logR, (std::log(maxima[a]) - logC - rho * al * std::log(al)) / al);
  }
  fit.R = logR < -700 ? 0.0 : std::exp(logR);
  fit.envelope_ok = true;
  for (std::size_t a = 1; a < maxima.size(); ++a) {
    if (maxima[a] <= 0) continue;
    double al = static_cast<double>(a);
    double bound = logC + al * logR + rho * al * std::log(al);
    fit.envelope_ok = fit.envelope_ok && std::log(maxima[a]) <= bound + 1e-9 * std::fabs(bound) + 1e-12;
  }
  return fit;
}

}  // namespace ka
