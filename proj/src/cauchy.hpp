#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "cauchy_data.hpp"
#include "slab.hpp"

namespace ka {

// Memo table for the sequence C_0(f), C_1(f), ... of a decomposition:
// C_l = 0 for l <= m-2, C_{m-1} = f, C_l = -sum_{k<m} Q_k(D) C_{k+l-m}(f).
class CSequence {
 public:
  CSequence(SlabDecomposition dec, CauchyData f);
  const SlabDecomposition& decomposition() const { return dec_; }
  const CauchyData& datum() const { return f_; }
  CauchyData get(int l);
  // index after which every C_l is exactly zero, once m consecutive zeros
  // have been seen up to `limit`; nullopt when no termination was detected
  std::optional<int> last_nonzero(int limit);

 private:
  void extend(int l);
  SlabDecomposition dec_;
  CauchyData f_;
  std::vector<CauchyData> c_;
  std::mutex mu_;
};

CauchyData c_op_recursive(const SlabDecomposition& dec, int l, const CauchyData& f);
// Explicit route: C_{m-1+l} = sum_{sigma(s)=l} (-1)^{|s|} M(s) prod_k Q_{m-k}(D)^{s_k} f
CauchyData c_op_explicit(const SlabDecomposition& dec, int l, const CauchyData& f);

// Truncated formal series sum_{l<=n} C_l(f) (i x_d)^l / l!.
struct LSeries {
  int n = 0;
  std::vector<CauchyData> C;
  std::optional<int> last_nonzero;  // exact termination, when detected
  Estimate evaluate(std::span<const double> xprime, double xd) const;
};
LSeries l_series(const SlabDecomposition& dec, const CauchyData& f, int n);

// u = sum_j sum_k Q_{j+k+1}(D) D_d^k L_n(h_j), held as
// u = sum_l U_l(x') (i x_d)^l / l!, U_l = sum_{j,k: l+k<=n} Q_{j+k+1}(D) C_{l+k}(h_j).
struct CauchySolution {
  SlabDecomposition dec;
  std::vector<CauchyData> h;
  int n = 0;
  std::vector<CauchyData> U;
  bool terminated = false;  // every C-sequence terminated within n

  Estimate evaluate(std::span<const double> xprime, double xd) const;
  // D_d^s u restricted to x_d = 0
  const CauchyData& trace(int s) const { return U.at(static_cast<std::size_t>(s)); }
  // u as a polynomial in d variables (polynomial data with terminated series)
  std::optional<MultiPoly> as_polynomial() const;
  nlohmann::json summary() const;
};

CauchySolution cauchy_solve(const SlabDecomposition& dec, const std::vector<CauchyData>& h, int n);

// Coefficients of (i x_d)^l/l! in P(D) L_n(f), l = 0..n-m, computed from the
// explicit route; all vanish when the preparation identity holds. For
// polynomial data the check is done on the d-variable polynomial L_n(f).
struct PrepIdentityResult {
  bool holds = false;
  int checked_up_to = -1;
  std::vector<CauchyData> residual;
};
PrepIdentityResult prep_identity_check(const SlabDecomposition& dec, const CauchyData& f, int n);

// sum_{j<=s} sum_{k=m-1-s}^{m-1-j} Q_{j+k+1}(D) C_{k+s}(h_j) - h_s, with the
// C computed by the explicit formula; zero for symbolic data.
CauchyData verify_prep_identity(const SlabDecomposition& dec, const std::vector<CauchyData>& h, int s);

// u at a point from the explicit composition sums (no recursion).
Estimate remark_formula_eval(const SlabDecomposition& dec, const std::vector<CauchyData>& h,
                             std::span<const double> xprime, double xd, int n);

struct TailBound {
  double value = 0;  // +inf on overflow or divergence
  bool diverges = false;
  bool overflow = false;
};

// C * sum_{l>n} (e m max(q,1) max(R,1) B / l^{1 - rho gamma})^l
TailBound convergence_tail_bound(int n, double C, double R, double B, double rho, double gamma, int m,
                                 double q);
// smallest n <= n_max with bound <= tol, or -1
int auto_truncation(double tol, double C, double R, double B, double rho, double gamma, int m, double q,
                    int n_max = 4096);

}  // namespace ka
