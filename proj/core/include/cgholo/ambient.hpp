#pragma once

#include <memory>

#include "cgholo/tensor.hpp"

namespace cgholo {

/// Choice of the boundary-metric family g_x in g₊ = (dx² + g_x)/x².
enum class AmbientMode {
  ExactHyperbolicUpperHalf,  // g_x = g (use with a flat boundary chart)
  ExactBall,                 // g_x = (1 − x²/4)² g (round-sphere boundary)
  ExactAdS,                  // g_x = g (Minkowski boundary)
  Truncated2,                // g_x = g − x² P
};

AmbientMode ambient_mode_from_string(const std::string& name);

/// Normal-form target metric g₊ = (dx² + g_x)/x² on (0, ∞) × chart.
/// Coordinate index 0 is x; indices 1..n are the boundary chart coordinates.
class AmbientMetric {
public:
  AmbientMetric(std::shared_ptr<const ChartMetric> boundary, AmbientMode mode);

  int boundary_dim() const { return boundary_->dim(); }
  AmbientMode mode() const { return mode_; }
  const ChartMetric& boundary() const { return *boundary_; }
  std::shared_ptr<const ChartMetric> boundary_ptr() const { return boundary_; }

  /// The family g_x(y) as an n×n matrix. Requires x ≥ 0.
  Mat gx_at(double x, const Vec& y) const;

  /// Full (n+1)×(n+1) matrix of g₊ at (x, y); block diag(1/x², g_x/x²).
  Mat gplus_at(double x, const Vec& y) const;

  /// Exact Christoffel symbols Γ^I_JK of g₊, indices 0..n.
  Tensor3 christoffel_gplus(double x, const Vec& y) const;

  /// Leading-order predictions for the same symbols: Γ⁰₀₀ = −1/x,
  /// Γ⁰ⱼₖ = gⱼₖ/x, Γⁱ₀ₖ = −δⁱₖ/x − xPⁱₖ, Γⁱⱼₖ = boundary Γ. Requires the
  /// boundary Schouten tensor (n ≥ 3 or an override).
  struct AsymptoticChristoffels {
    double gamma000;
    Mat gamma0jk;   // Γ⁰ⱼₖ prediction (j,k = 1..n as 0-based boundary indices)
    Mat gammai0k;   // Γⁱ₀ₖ prediction
    Tensor3 gammaijk;  // boundary Christoffels
  };
  AsymptoticChristoffels christoffel_asymptotic(double x, const Vec& y) const;

  /// max |Ric(g₊) + n g₊| entry over max |g₊| entry, with ∂Γ by central
  /// finite differences (step 1e-4·x). Diagnostic accuracy ~1e-5.
  double einstein_residual(double x, const Vec& y) const;

private:
  // g_x together with ∂_x g_x and ∂_k g_x
  void gx_jets(double x, const Vec& y, Mat& gx, Mat& dgx_dx, Tensor3& dgx_dy) const;

  std::shared_ptr<const ChartMetric> boundary_;
  AmbientMode mode_;
};

/// Riemann tensor R^I_JKL of g₊ with ∂Γ by central differences (test and
/// diagnostic use; step h defaults to 1e-4·x).
Tensor4 riemann_gplus_fd(const AmbientMetric& a, double x, const Vec& y, double h = 0.0);

}  // namespace cgholo
