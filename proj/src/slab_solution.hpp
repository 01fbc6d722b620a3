#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cauchy.hpp"
#include "gevrey.hpp"
#include "hormander.hpp"
#include "slab.hpp"

namespace ka {

struct ColumnClass {
  double x1 = 0;
  double max_abs = 0;
  double max_err = 0;
  std::string label;  // negligible | significant | indeterminate
};

// Per-column classification of a sampled field against tol_rel * max |field|.
// A column is negligible when max + err <= threshold, significant when
// max - err > threshold, indeterminate otherwise.
struct SupportReport {
  double tol_rel = 0;
  double threshold = 0;
  double field_max = 0;
  std::vector<ColumnClass> columns;
  // x1 range of the columns that are not negligible
  std::optional<double> slab_lo, slab_hi;

  const ColumnClass& column(double x1) const;
  nlohmann::json to_json() const;
};

SupportReport support_report(const Field& field, double tol_rel);

struct SlabSpec {
  double a = 1.0, eps = 0.25, rho = 1.5;
  int n = 80;
  Grid2 grid{-1.6, 0.4, -0.2, 0.2, 0.1};
  ContourSpec contour;
  double tol_rel = 1e-3;
  double margin_lo_frac = 0.5, margin_hi_frac = 0.25;

  nlohmann::json to_json() const;
  static SlabSpec from_json(const nlohmann::json& j);
};

// x1 -> g(x1) D_d^j v(x1, 0) with its x1-derivatives by the Leibniz rule.
// All j share one cache of trace jets per x1.
class TraceProductOracle : public DerivativeOracle {
 public:
  struct Cache {
    std::shared_ptr<const HormanderV> v;
    std::shared_ptr<const GevreyCutoff> g;
    int jmax = 0;
    int order = 0;  // jets are computed to this order
    std::mutex mu;
    struct Entry {
      std::vector<double> g;
      std::vector<std::vector<Estimate>> trace;  // [j][k]
    };
    std::map<double, std::shared_ptr<const Entry>> at;
    std::shared_ptr<const Entry> get(double x1);
  };

  TraceProductOracle(std::shared_ptr<Cache> cache, int j, int max_order);
  int dim() const override { return 1; }
  int max_order() const override { return max_order_; }
  Estimate derivative(std::span<const double> x, const Exponent& beta) const override;
  std::string describe() const override;

 private:
  std::shared_ptr<Cache> cache_;
  int j_;
  int max_order_;
};

struct SlabSolutionRun {
  SlabSpec spec;
  HypothesisReport hypotheses;
  nlohmann::json cutoff;
  int derivative_order = 0;  // highest x1-derivative of h_j used by u
  GevreyFit fit;
  TailBound tail;
  bool degraded = false;
  Field field;
  SupportReport support;
  // u - v over the grid columns with -a < x1 < -eps
  double strip_max_v = 0, strip_max_diff = 0, strip_max_err = 0;
  std::shared_ptr<const CauchySolution> solution;
  std::shared_ptr<const HormanderV> v;

  nlohmann::json summary() const;
};

// Null solution supported in the slab -(a+eps) <= x1 <= 0: u solves the
// Cauchy problem with data h_j = g D_d^j v(., 0), g a Gevrey cutoff equal to
// one near [-a, -eps]. Two variables only.
SlabSolutionRun slab_solution(const SlabDecomposition& dec, const SlabSpec& spec);

}  // namespace ka
