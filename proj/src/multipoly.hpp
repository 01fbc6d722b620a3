#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "scalar.hpp"

namespace ka {

using Exponent = std::vector<int>;

int total_degree(const Exponent& a);

// Graded order: higher total degree first, then lexicographically larger
// exponent first (x1 before x2). Map iteration order is the printing order.
struct GradedOrder {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

// Sparse polynomial in d variables with complex coefficients. No stored
// zero coefficients. All coefficients share the polynomial's mode.
class MultiPoly {
 public:
  using Terms = std::map<Exponent, Scalar, GradedOrder>;

  MultiPoly() : dim_(0), mode_(Mode::exact) {}
  MultiPoly(int dim, Mode mode);

  static MultiPoly constant(int dim, const Scalar& c);
  static MultiPoly variable(int dim, int j, Mode mode);  // x_{j+1}, j zero-based
  static MultiPoly monomial(int dim, const Exponent& alpha, const Scalar& c);

  int dim() const { return dim_; }
  Mode mode() const { return mode_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // -1 for the zero polynomial
  int degree_in(int j) const;
  Scalar coeff(const Exponent& alpha) const;

  void add_term(const Exponent& alpha, const Scalar& c);

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Scalar& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Scalar& c) { return a *= c; }
  friend MultiPoly operator*(const Scalar& c, MultiPoly a) { return a *= c; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  bool operator==(const MultiPoly& o) const;
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  // product with all terms of total degree > max_degree dropped
  static MultiPoly mul_truncated(const MultiPoly& a, const MultiPoly& b, int max_degree);
  MultiPoly pow(int n) const;
  MultiPoly truncated(int max_degree) const;
  MultiPoly homogeneous_part(int k) const;
  MultiPoly principal_part() const;

  // plain partial derivative d/dx_{j+1}
  MultiPoly derivative(int j) const;
  // plain partial d^alpha
  MultiPoly derivative(const Exponent& alpha) const;
  // this polynomial as a symbol applied to f: sum_a c_a D^a f, D = -i d
  MultiPoly apply_as_operator(const MultiPoly& f) const;

  cplx evaluate(std::span<const cplx> x) const;
  Scalar evaluate_exact(std::span<const Scalar> x) const;

  // drop variable j (keeping only terms where it has exponent 0)
  MultiPoly restrict_zero(int j) const;
  // coefficient of x_j^k as a polynomial in the remaining d-1 variables
  MultiPoly coefficient_in(int j, int k) const;
  // insert a new variable at position j with exponent 0
  MultiPoly embed(int new_dim, int j) const;

  MultiPoly to_mode(Mode m) const;
  std::size_t hash() const;

  std::string to_string() const;
  nlohmann::json to_json() const;
  static MultiPoly from_json(const nlohmann::json& j);

 private:
  int dim_;
  Mode mode_;
  Terms terms_;
};

// Parses sums of monomials with rational/decimal/complex coefficients, e.g.
// "i*x1 + x2^2", "x1^2 - 3/2*x1*x2 + (1+2*i)*x2". Variables are x1..xd.
MultiPoly parse_poly(const std::string& text, int dim, Mode mode = Mode::exact);

// Exponential-polynomial expression sum_k p_k(x) exp(i lambda_k . x).
struct ExpPolyTerm {
  std::vector<Scalar> freq;  // lambda, in the expression's mode
  MultiPoly poly;
};

// Accepts everything parse_poly does plus factors exp(L) where L is linear
// with no constant term; exp(L) = exp(i lambda.x) with lambda = -i L.
std::vector<ExpPolyTerm> parse_exp_poly(const std::string& text, int dim,
                                        Mode mode = Mode::exact);

}  // namespace ka
