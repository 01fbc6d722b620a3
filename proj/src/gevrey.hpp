#pragma once

#include <vector>

#include <json.hpp>

namespace ka {

enum class JetPrecision { float64, decimal50 };

// phi(y) = exp(-(1 - y^2)^{-1/(rho-1)}) / Z on (-1, 1), zero outside,
// normalized to unit integral. Gevrey class rho > 1.
class GevreyBump {
 public:
  explicit GevreyBump(double rho, JetPrecision prec = JetPrecision::float64);
  double rho() const { return rho_; }
  double normalization() const { return Z_; }
  double value(double y) const;
  // phi^{(k)}(y) for k = 0..order
  std::vector<double> derivatives(double y, int order) const;
  // integral of phi over (-1, y]
  double cdf(double y) const;

 private:
  double rho_;
  JetPrecision prec_;
  double Z_;
};

struct CutoffSpec {
  double plateau_lo = 0, plateau_hi = 0;  // g = 1 here
  double support_lo = 0, support_hi = 0;  // supp g is inside
  double rho = 1.5;
  double delta = 0;  // 0: largest admissible
  JetPrecision precision = JetPrecision::float64;
};

// Default slab cutoff: plateau [-a - eps/2, -eps + eps/4], support bound
// [-a - eps, -eps/2].
CutoffSpec slab_cutoff_spec(double a, double eps, double rho,
                            double margin_lo_frac = 0.5, double margin_hi_frac = 0.25);

// g = indicator[plateau_lo - delta, plateau_hi + delta] convolved with the
// bump scaled to (-delta, delta).
class GevreyCutoff {
 public:
  explicit GevreyCutoff(const CutoffSpec& spec);
  const CutoffSpec& spec() const { return spec_; }
  double delta() const { return delta_; }
  double true_support_lo() const { return c1_ - delta_; }
  double true_support_hi() const { return c2_ + delta_; }
  double value(double x) const;
  // g^{(k)}(x) for k = 0..order
  std::vector<double> derivatives(double x, int order) const;
  nlohmann::json to_json() const;

 private:
  CutoffSpec spec_;
  GevreyBump bump_;
  double delta_, c1_, c2_;
};

struct GevreyFit {
  double C = 0, R = 0, rho = 0;
  bool envelope_ok = false;
};

// Constants with M_alpha <= C R^alpha alpha^{rho alpha} for the supplied
// derivative maxima M_0..M_K (sup over a sample set).
GevreyFit fit_gevrey_constants(const std::vector<double>& maxima, double rho);

}  // namespace ka
