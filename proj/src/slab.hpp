#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "multipoly.hpp"

namespace ka {

// P = lead * sum_{k<=m} Q_k(x') x_d^k with Q_m = 1. Q_k live in d-1 variables.
struct SlabDecomposition {
  int dim = 0;  // d
  int m = 0;
  std::vector<MultiPoly> Q;  // Q[0..m]
  Scalar lead;
  MultiPoly original;
  bool normalized = true;

  Mode mode() const { return original.mode(); }
  // Q_k for 0 <= k <= m, zero polynomial outside
  const MultiPoly& q(int k) const { return Q.at(static_cast<std::size_t>(k)); }
  std::size_t hash() const;
  nlohmann::json to_json() const;
  SlabDecomposition to_mode(Mode m) const;
};

// Requires deg P >= 1, d >= 2 and e_d non-characteristic (the x_d^m
// coefficient is a nonzero constant where m = deg P).
SlabDecomposition slab_decompose(const MultiPoly& P, bool normalize = true);

enum class Verification { exact_verified, sampled_plausible, failed, unknown };
std::string verification_name(Verification v);

struct HypothesisReport {
  int dim = 0;
  int degree = 0;
  bool e1_characteristic = false;
  bool ed_noncharacteristic = false;
  Verification single_direction = Verification::unknown;
  std::vector<std::vector<double>> characteristic_directions;  // d = 2 or sampled
  bool degx1_ok = false;      // deg_{x1} Q_k < m - k for all k < m
  bool gamma_defined = false;
  mpq_class gamma = 0;       // exact in exact mode
  double gamma_value = 0.0;  // always filled when defined
  double q = 0;              // max over k < m of the coefficient sum of |Q_k|
  int p = 0;                 // ramification index at infinity (d >= 2)
  std::vector<std::string> notes;

  bool all_hold() const;
  nlohmann::json to_json() const;
};

// Unit characteristic directions of a 2-variable polynomial, from the real
// roots of P_m(1,t) plus the check P_m(0,1) = 0. Exact input only.
std::vector<std::vector<double>> characteristic_directions_2d(const MultiPoly& P);

HypothesisReport hypotheses_report(const MultiPoly& P, std::uint64_t seed = 1);
inline HypothesisReport check_hypotheses(const SlabDecomposition& dec, std::uint64_t seed = 1) {
  return hypotheses_report(dec.original, seed);
}
// sum_alpha |q_alpha|
double coefficient_sum(const MultiPoly& q);

// Newton-polygon slopes of P(s e1 + t e_d) in t as s -> infinity; returns
// the lcm of the slope denominators (ramification) and the largest slope.
struct NewtonPolygonInfo {
  int p = 1;
  double max_slope = 0.0;
  std::vector<mpq_class> slopes;
};
NewtonPolygonInfo newton_polygon_at_infinity(const SlabDecomposition& dec);

}  // namespace ka
