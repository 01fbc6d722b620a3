#pragma once

// Reference values for the heat null solution from its double series.
// With T = -x1 > 0 and z = k + (n + j)/2 + i r,
//   d1^k D2^j v(x1, x2) = 2 pi (-1)^k sum_n sum_i (i x2)^n / n! (-1)^i / i!
//                         T^{-z-1} / Gamma(-z),
// and 1/Gamma(-z) = -sin(pi z) Gamma(z + 1) / pi. Summed in 100 digits.

#include <complex>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace katest {

inline std::complex<double> heat_v_series(double x1, double x2, int k, int j, double r) {
  using F = boost::multiprecision::cpp_bin_float_100;
  if (x1 >= 0) return 0.0;
  const F T = -x1, pi = boost::math::constants::pi<F>();
  const F tiny("1e-95");
  F re = 0, im = 0, cmax = 0;
  int quiet_n = 0;
  for (int n = 0; n < 400; ++n) {
    F inner = 0, tmax = 0;
    int quiet = 0;
    for (int i = 0; i < 4000; ++i) {
      F z = F(k) + F(n + j) / 2 + i * F(r);
      F t = -sin(pi * z) * boost::math::tgamma(z + 1) / pi * pow(T, -z - 1) / boost::math::tgamma(F(i + 1));
      if (i % 2) t = -t;
      inner += t;
      tmax = std::max(tmax, F(abs(t)));
      quiet = abs(t) < std::max(tiny, F(tmax * F("1e-60"))) ? quiet + 1 : 0;
      if (i > 30 && quiet > 4) break;
    }
    F c = pow(F(x2), n) / boost::math::tgamma(F(n + 1)) * inner;
    switch (n % 4) {
      case 0: re += c; break;
      case 1: im += c; break;
      case 2: re -= c; break;
      default: im -= c; break;
    }
    if (x2 == 0) break;
    cmax = std::max(cmax, F(abs(c)));
    quiet_n = abs(c) < std::max(tiny, F(cmax * F("1e-40"))) ? quiet_n + 1 : 0;
    if (n > 10 && quiet_n > 4) break;
  }
  const double sign = k % 2 ? -1.0 : 1.0;
  return std::complex<double>(static_cast<double>(re), static_cast<double>(im)) *
         (2 * boost::math::constants::pi<double>() * sign);
}

}  // namespace katest
