#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include <json.hpp>

#include "slab.hpp"

namespace ka {

// P(s e1 + t e2) = lead * sum_k a_k(s) t^k for a two-variable decomposition;
// a_k are the Q_k as dense complex polynomials in s (low to high).
class SymbolPencil {
 public:
  explicit SymbolPencil(const SlabDecomposition& dec);
  int m() const { return static_cast<int>(a_.size()) - 1; }
  std::vector<cplx> t_coeffs(cplx s) const;
  cplx value(cplx s, cplx t) const;
  // sum_k |a_k(s)| |t|^k, the scale for residual checks
  double scale(cplx s, cplx t) const;
  cplx dt(cplx s, cplx t) const;
  cplx ds(cplx s, cplx t) const;
  std::vector<cplx> roots(cplx s) const;
  // discriminant in t as a polynomial in s (m <= 3); empty for m = 1
  std::vector<cplx> discriminant() const;

 private:
  std::vector<std::vector<cplx>> a_;
};

// Continuous track of one root t(u) of the pencil along a path s(u),
// u in [u_lo, u_hi], started from a given root at u_anchor. Samples are
// placed so that the root moves less than a quarter of the local root
// separation between neighbours; evaluation is Newton from the nearest
// sample, checked against half the separation there.
class RootTrack {
 public:
  using Path = std::function<cplx(double)>;
  RootTrack() = default;
  RootTrack(const SymbolPencil* pencil, Path path, double u_anchor, cplx t_anchor, double u_lo, double u_hi);
  double u_lo() const { return u_lo_; }
  double u_hi() const { return u_hi_; }
  cplx s(double u) const { return path_(u); }
  cplx t(double u) const;
  cplx t_at(double u, cplx s) const;  // s must be path(u)
  std::size_t size() const { return u_.size(); }
  double min_separation() const;
  // largest |P(s, t)| / scale over the samples
  double max_residual() const { return max_res_; }

 private:
  void extend(double u_end);
  const SymbolPencil* pencil_ = nullptr;
  Path path_;
  double u_lo_ = 0, u_hi_ = 0;
  std::vector<double> u_;
  std::vector<cplx> t_;
  std::vector<double> sep_;
  double max_res_ = 0;
};

struct BranchPointInfo {
  int p = 1;
  double max_slope = 0;
  double M = 0;                        // max |discriminant root|^{1/p}
  std::vector<cplx> discriminant_roots;
  double tau_min() const { return std::pow(2 * M, p); }
};

BranchPointInfo branch_points(const SlabDecomposition& dec);

// Roots at the anchor s = i tau in canonical order: real part descending,
// then imaginary part descending.
std::vector<cplx> anchor_roots(const SymbolPencil& pencil, double tau);

// One root branch t(s) of P(s e1 + t e2) = 0, anchored at s = i tau and
// tracked along Im s = tau for |Re s| <= sigma_max.
class PuiseuxBranch {
 public:
  PuiseuxBranch(const SlabDecomposition& dec, int branch_index, double tau, double sigma_max);
  const SymbolPencil& pencil() const { return *pencil_; }
  int branch_index() const { return index_; }
  int p() const { return info_.p; }
  const BranchPointInfo& info() const { return info_; }
  double tau() const { return tau_; }
  double sigma_max() const { return track_.u_hi(); }
  cplx anchor() const { return anchor_; }
  // t on the horizontal contour, s = sigma + i tau
  cplx t(double sigma) const { return track_.t(sigma); }
  cplx t_at(double sigma, cplx s) const { return track_.t_at(sigma, s); }
  const RootTrack& track() const { return track_; }
  // t ~ c s^kappa at the far end of the track (diagnostic)
  double leading_exponent() const { return info_.max_slope; }
  cplx leading_coefficient() const;
  nlohmann::json to_json() const;

 private:
  std::shared_ptr<SymbolPencil> pencil_;
  int index_;
  double tau_;
  cplx anchor_;
  BranchPointInfo info_;
  RootTrack track_;
};

}  // namespace ka
