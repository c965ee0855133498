#include "cgholo/ambient.hpp"

#include <cmath>

#include "cgholo/error.hpp"

namespace cgholo {

AmbientMode ambient_mode_from_string(const std::string& name) {
  if (name == "hyperbolic_upper_half") return AmbientMode::ExactHyperbolicUpperHalf;
  if (name == "ball") return AmbientMode::ExactBall;
  if (name == "ads") return AmbientMode::ExactAdS;
  if (name == "truncated2") return AmbientMode::Truncated2;
  throw ConfigError("unknown ambient mode '" + name + "'");
}

AmbientMetric::AmbientMetric(std::shared_ptr<const ChartMetric> boundary, AmbientMode mode)
    : boundary_(std::move(boundary)), mode_(mode) {
  if (!boundary_) throw ConfigError("ambient metric needs a boundary chart");
  if (mode_ == AmbientMode::Truncated2 && boundary_->dim() == 2 &&
      !boundary_->has_schouten_override())
    throw ConfigError("truncated ambient metric at boundary dimension 2 needs a Schouten override");
}

void AmbientMetric::gx_jets(double x, const Vec& y, Mat& gx, Mat& dgx_dx,
                            Tensor3& dgx_dy) const {
  int n = boundary_->dim();
  Mat g(n, n);
  Tensor3 dg(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet2 jet = boundary_->component(i, j).eval_jet2(y);
      g(i, j) = g(j, i) = jet.value;
      for (int k = 0; k < n; ++k) dg(i, j, k) = dg(j, i, k) = jet.grad[k];
    }

  switch (mode_) {
    case AmbientMode::ExactHyperbolicUpperHalf:
    case AmbientMode::ExactAdS:
      gx = g;
      dgx_dx = Mat::Zero(n, n);
      dgx_dy = dg;
      return;
    case AmbientMode::ExactBall: {
      double f = 1.0 - x * x / 4.0;
      double fac = f * f;
      double dfac = -x * f;  // d/dx (1 − x²/4)²
      gx = fac * g;
      dgx_dx = dfac * g;
      dgx_dy = Tensor3(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) dgx_dy(i, j, k) = fac * dg(i, j, k);
      return;
    }
    case AmbientMode::Truncated2: {
      Mat P = curvature_at(*boundary_, y).schouten;
      gx = g - x * x * P;
      dgx_dx = -2.0 * x * P;
      dgx_dy = dg;
      const double h = 1e-5;
      for (int k = 0; k < n; ++k) {
        Vec yp = y, ym = y;
        yp[k] += h;
        ym[k] -= h;
        Mat dP = (curvature_at(*boundary_, yp).schouten -
                  curvature_at(*boundary_, ym).schouten) /
                 (2.0 * h);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) dgx_dy(i, j, k) -= x * x * dP(i, j);
      }
      return;
    }
  }
  throw Error("unhandled ambient mode");
}

Mat AmbientMetric::gx_at(double x, const Vec& y) const {
  if (x < 0.0) throw DomainError("x must be nonnegative");
  Mat gx, dx;
  Tensor3 dy;
  gx_jets(x, y, gx, dx, dy);
  return gx;
}

Mat AmbientMetric::gplus_at(double x, const Vec& y) const {
  if (x <= 0.0) throw DomainError("x must be positive");
  int n = boundary_->dim();
  Mat G = Mat::Zero(n + 1, n + 1);
  double ix2 = 1.0 / (x * x);
  G(0, 0) = ix2;
  G.block(1, 1, n, n) = ix2 * gx_at(x, y);
  return G;
}

Tensor3 AmbientMetric::christoffel_gplus(double x, const Vec& y) const {
  if (x <= 0.0) throw DomainError("x must be positive");
  int n = boundary_->dim();
  int N = n + 1;
  Mat gx, dgx_dx;
  Tensor3 dgx_dy;
  gx_jets(x, y, gx, dgx_dx, dgx_dy);

  double ix2 = 1.0 / (x * x), ix3 = ix2 / x;

  Mat G = Mat::Zero(N, N);
  G(0, 0) = ix2;
  G.block(1, 1, n, n) = ix2 * gx;

  Tensor3 dG(N);  // dG(I,J,K) = ∂_K G_IJ
  dG(0, 0, 0) = -2.0 * ix3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      dG(i + 1, j + 1, 0) = ix2 * dgx_dx(i, j) - 2.0 * ix3 * gx(i, j);
      for (int k = 0; k < n; ++k) dG(i + 1, j + 1, k + 1) = ix2 * dgx_dy(i, j, k);
    }

  Mat gx_inv = Eigen::PartialPivLU<Mat>(gx).solve(Mat::Identity(n, n));
  Mat G_inv = Mat::Zero(N, N);
  G_inv(0, 0) = x * x;
  G_inv.block(1, 1, n, n) = x * x * gx_inv;

  Tensor3 gamma(N);
  for (int I = 0; I < N; ++I)
    for (int J = 0; J < N; ++J)
      for (int K = J; K < N; ++K) {
        double acc = 0.0;
        for (int L = 0; L < N; ++L)
          acc += G_inv(I, L) * (dG(L, K, J) + dG(L, J, K) - dG(J, K, L));
        gamma(I, J, K) = gamma(I, K, J) = 0.5 * acc;
      }
  return gamma;
}

AmbientMetric::AsymptoticChristoffels AmbientMetric::christoffel_asymptotic(
    double x, const Vec& y) const {
  int n = boundary_->dim();
  CurvaturePoint cp = curvature_at(*boundary_, y);
  AsymptoticChristoffels r;
  r.gamma000 = -1.0 / x;
  r.gamma0jk = cp.g / x;
  Mat P_mixed = cp.g_inv * cp.schouten;  // P^i_k
  r.gammai0k = -Mat::Identity(n, n) / x - x * P_mixed;
  r.gammaijk = cp.gamma;
  return r;
}

Tensor4 riemann_gplus_fd(const AmbientMetric& a, double x, const Vec& y, double h) {
  int N = a.boundary_dim() + 1;
  if (h <= 0.0) h = 1e-4 * x;
  if (x - h <= 0.0) throw DomainError("finite-difference step underflow near the boundary");

  auto gamma_at = [&](double xx, const Vec& yy) { return a.christoffel_gplus(xx, yy); };
  Tensor3 gamma = gamma_at(x, y);

  // dgamma(I,J,K,M) = ∂_M Γ^I_JK
  Tensor4 dgamma(N);
  for (int M = 0; M < N; ++M) {
    double xp = x, xm = x;
    Vec yp = y, ym = y;
    if (M == 0) {
      xp += h;
      xm -= h;
    } else {
      yp[M - 1] += h;
      ym[M - 1] -= h;
    }
    Tensor3 gp = gamma_at(xp, yp), gm = gamma_at(xm, ym);
    for (int I = 0; I < N; ++I)
      for (int J = 0; J < N; ++J)
        for (int K = 0; K < N; ++K)
          dgamma(I, J, K, M) = (gp(I, J, K) - gm(I, J, K)) / (2.0 * h);
  }

  Tensor4 riem(N);
  for (int I = 0; I < N; ++I)
    for (int J = 0; J < N; ++J)
      for (int K = 0; K < N; ++K)
        for (int L = 0; L < N; ++L) {
          double acc = dgamma(I, L, J, K) - dgamma(I, K, J, L);
          for (int A = 0; A < N; ++A)
            acc += gamma(I, K, A) * gamma(A, L, J) - gamma(I, L, A) * gamma(A, K, J);
          riem(I, J, K, L) = acc;
        }
  return riem;
}

double AmbientMetric::einstein_residual(double x, const Vec& y) const {
  int n = boundary_->dim();
  int N = n + 1;
  Tensor4 riem = riemann_gplus_fd(*this, x, y);
  Mat ric = Mat::Zero(N, N);
  for (int J = 0; J < N; ++J)
    for (int L = 0; L < N; ++L)
      for (int K = 0; K < N; ++K) ric(J, L) += riem(K, J, K, L);
  Mat G = gplus_at(x, y);
  Mat resid = ric + n * G;
  return resid.cwiseAbs().maxCoeff() / G.cwiseAbs().maxCoeff();
}

}  // namespace cgholo
