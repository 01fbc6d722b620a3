#pragma once

#include <vector>

#include <gmpxx.h>

#include "scalar.hpp"

namespace ka {

// Dense univariate polynomial over Q, coefficients from low to high degree.
using UPolyQ = std::vector<mpq_class>;

void trim(UPolyQ& p);
int udegree(const UPolyQ& p);
UPolyQ umul(const UPolyQ& a, const UPolyQ& b);
UPolyQ usub(const UPolyQ& a, const UPolyQ& b);
void udivmod(const UPolyQ& a, const UPolyQ& b, UPolyQ& q, UPolyQ& r);
UPolyQ ugcd(UPolyQ a, UPolyQ b);  // monic, or empty when both are zero
UPolyQ uderivative(const UPolyQ& p);
mpq_class ueval(const UPolyQ& p, const mpq_class& x);

// Distinct real roots of a nonzero rational polynomial, increasing, each
// refined by bisection to about double precision.
std::vector<double> real_roots(const UPolyQ& p);
int count_real_roots(const UPolyQ& p);

// Real roots of a polynomial with complex rational coefficients: the real
// roots of gcd(Re p, Im p).
std::vector<double> real_roots_complex(const std::vector<Scalar>& coeffs);

// Roots of sum_k c_k t^k (c low to high, leading nonzero) via the companion
// matrix, then polished by Newton steps.
std::vector<cplx> poly_roots(const std::vector<cplx>& c);

}  // namespace ka
