#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cgholo/expr.hpp"
#include "cgholo/types.hpp"

namespace cgholo {

/// Metric signature as eigenvalue sign counts (p positive, q negative).
struct Signature {
  int p = 0;
  int q = 0;
};

/// Symmetric matrix of component expressions g_ij(y1..yn) on a single
/// coordinate chart. Signature may be indefinite. Immutable once built.
class ChartMetric {
public:
  /// `upper` lists the upper triangle row-major: g11, g12, .., g1n, g22, ...
  ChartMetric(int n, std::vector<Expr> upper, Signature sig);

  /// Parses component strings in variables y1..yn.
  static ChartMetric from_strings(int n, const std::vector<std::string>& upper, Signature sig);

  /// diag(1,...,1) on ℝⁿ.
  static ChartMetric euclidean(int n);
  /// diag(-1,1,...,1).
  static ChartMetric minkowski(int n);
  /// Upper half-plane g = (dy1² + dy2²)/y1².
  static ChartMetric hyperbolic_half_plane();
  /// Unit round sphere in polar coordinates (n = 2: diag(1, sin²y1);
  /// n = 3: diag(1, sin²y1, sin²y1 sin²y2)).
  static ChartMetric round_sphere_polar(int n);

  int dim() const { return n_; }
  const std::vector<std::string>& vars() const { return vars_; }
  const Expr& component(int i, int j) const;  // symmetric access
  Signature signature() const { return sig_; }

  bool has_schouten_override() const { return !schouten_.empty(); }
  const Expr& schouten_component(int i, int j) const;  // symmetric access

private:
  friend ChartMetric schouten_override(const ChartMetric&, const std::vector<Expr>&,
                                       const std::vector<Vec>&);
  int n_;
  Signature sig_;
  std::vector<std::string> vars_;
  std::vector<Expr> comp_;      // n*(n+1)/2, upper triangle row-major
  std::vector<Expr> schouten_;  // empty, or n*(n+1)/2 for n = 2 overrides
};

/// All pointwise curvature data of a chart metric at one point.
/// Index conventions: gamma(i,j,k) = Γ^i_jk, dgamma(i,j,k,l) = ∂_l Γ^i_jk,
/// riemann(i,j,k,l) = R^i_jkl = ∂_k Γ^i_lj − ∂_l Γ^i_kj + Γ Γ terms,
/// ricci_jl = R^k_jkl.
struct CurvaturePoint {
  Vec y;
  Mat g, g_inv;
  Tensor3 gamma;
  Tensor4 dgamma;
  Tensor4 riemann;
  Mat ricci;
  double scalar = 0.0;
  Mat schouten;
};

/// Metric and inverse at a point. Throws SingularMetricError when the
/// condition number exceeds 1e12 or the eigenvalue sign counts disagree
/// with the declared signature.
std::pair<Mat, Mat> metric_at(const ChartMetric& m, const Vec& y);

/// Christoffel symbols Γ^i_jk from exact first derivatives of g.
Tensor3 christoffel(const ChartMetric& m, const Vec& y);

/// Full curvature stack. For n = 2 the Schouten tensor requires an override
/// (see schouten_override); without one this throws.
CurvaturePoint curvature_at(const ChartMetric& m, const Vec& y);

/// Returns a copy of the n = 2 chart carrying the user-supplied Schouten
/// expressions (upper triangle row-major). Validates tr_g P = R/2 at each
/// sample point to 1e-8 and the divergence identity ∇^j P_ij = ∇_i tr P by
/// finite differences.
ChartMetric schouten_override(const ChartMetric& m, const std::vector<Expr>& upperP,
                              const std::vector<Vec>& sample_points);

}  // namespace cgholo
