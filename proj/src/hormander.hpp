#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "cauchy_data.hpp"
#include "contour.hpp"
#include "puiseux.hpp"

namespace ka {

// Inclusive rectangular grid x1 = x1min + i h, x2 = x2min + j h.
struct Grid2 {
  double x1min = 0, x1max = 0, x2min = 0, x2max = 0, h = 0;
  int n1() const;
  int n2() const;
  double x1(int i) const { return x1min + i * h; }
  double x2(int j) const { return x2min + j * h; }
  // "X1MIN:X1MAX:X2MIN:X2MAX:H"
  static Grid2 parse(const std::string& text);
  nlohmann::json to_json() const;
  static Grid2 from_json(const nlohmann::json& j);
};

// Sampled complex field with absolute error bars, x1 the slow index.
struct Field {
  Grid2 grid;
  std::vector<cplx> value;
  std::vector<double> error;
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * grid.n2() + j; }
  cplx at(int i, int j) const { return value[index(i, j)]; }
  double err(int i, int j) const { return error[index(i, j)]; }
  double max_abs() const;
  std::string to_csv() const;
  // rows of |value|, one line per x2 value, for heatmap plotting
  std::string to_matrix() const;
};

struct NodeSet;

// Half-space supported null solution
//   v(x) = int_{Im s = tau} exp(i <x, s e1 + t(s) e2>) exp(-(s/i)^r) ds
// of a two-variable operator, evaluated by Gauss-Kronrod panels on the
// truncated contour. Derivatives carry the factor s^a1 t^a2 (D^alpha v).
class HormanderV {
 public:
  explicit HormanderV(const SlabDecomposition& dec, ContourSpec spec = {});
  ~HormanderV();
  const ContourSpec& spec() const { return spec_; }
  const PuiseuxBranch& branch() const { return *branch_; }
  const SlabDecomposition& decomposition() const { return dec_; }

  std::vector<Estimate> evaluate(const std::vector<std::array<double, 2>>& points,
                                 std::array<int, 2> alpha = {0, 0}) const;
  Estimate evaluate(double x1, double x2, std::array<int, 2> alpha = {0, 0}) const;
  Field sample(const Grid2& grid, std::array<int, 2> alpha = {0, 0}) const;

  // d1^k D2^j v(x1, 0) for k <= kmax, j <= jmax, indexed [j][k]. For x1 < 0
  // the contour is deformed to a parabola around the negative imaginary
  // axis; for x1 >= 0 the horizontal contour is used.
  std::vector<std::vector<Estimate>> trace_jet(double x1, int kmax, int jmax) const;

  // contour data of the most recent horizontal evaluation
  nlohmann::json info() const;

 private:
  struct Box {
    double x1lo, x1hi, x2lo, x2hi;
    int a1, a2;
    bool operator<(const Box& o) const;
  };
  std::shared_ptr<const NodeSet> nodes(const Box& box) const;
  std::shared_ptr<const NodeSet> build_nodes(const Box& box) const;
  const RootTrack& parabola(std::size_t mu_index) const;
  double mu_candidate(std::size_t i) const;
  std::vector<Estimate> trace_k(double x1, int k, int jmax) const;

  SlabDecomposition dec_;
  ContourSpec spec_;
  std::unique_ptr<PuiseuxBranch> branch_;
  double cap_ = 0;
  double disc_radius_ = 0;
  mutable std::mutex mu_;
  mutable std::map<Box, std::shared_ptr<const NodeSet>> cache_;
  mutable std::map<std::size_t, std::unique_ptr<RootTrack>> parabolas_;
  mutable nlohmann::json last_info_;
};

// P(D) applied to a sampled field by centered differences (second order in
// the step), at the interior points where every stencil fits.
Field fd_residual(const MultiPoly& P, const Field& f);

}  // namespace ka
