#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "multipoly.hpp"

namespace ka {

struct Estimate {
  cplx value = 0;
  double error = 0;  // absolute
};

// Pointwise source of plain partial derivatives of a function on R^n.
class DerivativeOracle {
 public:
  virtual ~DerivativeOracle() = default;
  virtual int dim() const = 0;
  virtual int max_order() const = 0;
  virtual Estimate derivative(std::span<const double> x, const Exponent& beta) const = 0;
  virtual std::string describe() const { return "numeric"; }
};

// A Cauchy datum on R^{d-1}: a polynomial, an exponential polynomial
// sum_k p_k(x) exp(i lambda_k . x), or a numeric function given as a sum of
// constant-coefficient operators applied to derivative oracles.
class CauchyData {
 public:
  enum class Kind { poly, exppoly, numeric };

  CauchyData() = default;
  static CauchyData zero(int dim, Mode mode);
  static CauchyData poly(const MultiPoly& p);
  static CauchyData exppoly(const std::vector<ExpPolyTerm>& terms, int dim, Mode mode);
  static CauchyData numeric(std::shared_ptr<const DerivativeOracle> f);
  // parse "x1^2 + exp(2*i*x1)*x1" style text in dim variables
  static CauchyData parse(const std::string& text, int dim, Mode mode = Mode::exact);

  Kind kind() const;
  int dim() const { return dim_; }
  Mode mode() const { return mode_; }
  // true only for a symbolic datum that is identically zero
  bool is_zero() const;
  // highest polynomial degree for polynomial data, -1 for the zero datum;
  // exponential and numeric data return -2 (no finite annihilating order)
  int poly_degree() const;
  const MultiPoly& as_poly() const;
  const std::vector<ExpPolyTerm>& exp_terms() const { return sym_; }

  CauchyData operator+(const CauchyData& o) const;
  CauchyData operator-(const CauchyData& o) const;
  CauchyData operator-() const;
  CauchyData scaled(const Scalar& c) const;
  // symbolic data only; numeric data are already floating
  CauchyData to_mode(Mode m) const;

  // q(D) f with D = -i d
  CauchyData apply_operator(const MultiPoly& q) const;
  // plain partial derivative d^alpha
  CauchyData differentiate(const Exponent& alpha) const;

  Estimate evaluate(std::span<const double> x) const;
  bool operator==(const CauchyData& o) const;
  std::size_t hash() const;
  std::string to_string() const;
  nlohmann::json to_json() const;

  struct NumericTerm {
    std::shared_ptr<const DerivativeOracle> oracle;
    MultiPoly op;  // symbol in D applied to the oracle function
  };
  const std::vector<NumericTerm>& numeric_terms() const { return num_; }

 private:
  CauchyData to_numeric() const;
  void normalize();

  int dim_ = 0;
  Mode mode_ = Mode::exact;
  bool numeric_ = false;
  std::vector<ExpPolyTerm> sym_;
  std::vector<NumericTerm> num_;
};

inline CauchyData apply_operator(const MultiPoly& q, const CauchyData& f) { return f.apply_operator(q); }

// Oracle view of a symbolic datum (used when mixing with numeric data).
class SymbolicOracle : public DerivativeOracle {
 public:
  explicit SymbolicOracle(CauchyData f);
  int dim() const override { return f_.dim(); }
  int max_order() const override { return 1 << 20; }
  Estimate derivative(std::span<const double> x, const Exponent& beta) const override;
  std::string describe() const override { return f_.to_string(); }

 private:
  CauchyData f_;
};

}  // namespace ka
