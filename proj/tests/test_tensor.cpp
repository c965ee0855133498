#include "doctest.h"

#include <cmath>
#include <random>

#include "cgholo/error.hpp"
#include "cgholo/tensor.hpp"

using namespace cgholo;

namespace {
Vec pt2(double a, double b) {
  Vec p(2);
  p << a, b;
  return p;
}
Vec pt3(double a, double b, double c) {
  Vec p(3);
  p << a, b, c;
  return p;
}
}  // namespace

TEST_CASE("flat and Minkowski metrics") {
  auto e3 = ChartMetric::euclidean(3);
  auto [g, ginv] = metric_at(e3, pt3(1, 2, 3));
  CHECK((g - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  Tensor3 gam = christoffel(e3, pt3(1, 2, 3));
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(gam(i, j, k)));
  CHECK(m == doctest::Approx(0.0));

  auto mink = ChartMetric::minkowski(2);
  auto [gm, gmi] = metric_at(mink, pt2(0.3, -0.7));
  CHECK(gm(0, 0) == doctest::Approx(-1.0));
  CHECK(gm(1, 1) == doctest::Approx(1.0));
  CHECK(mink.signature().p == 1);
  CHECK(mink.signature().q == 1);
}

TEST_CASE("sphere polar metric inverse at theta = pi/4") {
  auto s2 = ChartMetric::round_sphere_polar(2);
  auto [g, ginv] = metric_at(s2, pt2(M_PI / 4, 0.3));
  CHECK(g(0, 0) == doctest::Approx(1.0));
  CHECK(g(1, 1) == doctest::Approx(0.5));
  CHECK(ginv(1, 1) == doctest::Approx(2.0));
  CHECK(ginv(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("S2 Christoffel closed forms") {
  auto s2 = ChartMetric::round_sphere_polar(2);
  double th = 0.9;
  Tensor3 gam = christoffel(s2, pt2(th, 1.1));
  // Γ^θ_φφ = -sinθcosθ, Γ^φ_θφ = cotθ
  CHECK(gam(0, 1, 1) == doctest::Approx(-std::sin(th) * std::cos(th)));
  CHECK(gam(1, 0, 1) == doctest::Approx(std::cos(th) / std::sin(th)));
  CHECK(gam(0, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("hyperbolic half-plane Christoffels and curvature") {
  auto h0 = ChartMetric::hyperbolic_half_plane();
  double s = 0.8;
  Tensor3 gam = christoffel(h0, pt2(s, 2.0));
  // coordinates (y1, y2) with g = (dy1² + dy2²)/y1²
  CHECK(gam(0, 0, 0) == doctest::Approx(-1.0 / s));
  CHECK(gam(0, 1, 1) == doctest::Approx(1.0 / s));
  CHECK(gam(1, 0, 1) == doctest::Approx(-1.0 / s));
  // with the consistent override P = -g/2 (R = -2 constant)
  std::vector<Expr> P = {Expr::parse("-1/(2*y1^2)", h0.vars()), Expr::number(0.0, h0.vars()),
                         Expr::parse("-1/(2*y1^2)", h0.vars())};
  auto h = schouten_override(h0, P, {pt2(0.8, 2.0)});
  CurvaturePoint cp = curvature_at(h, pt2(s, 2.0));
  CHECK(cp.scalar == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("round S3 is Einstein with R = 6 and P = g/2") {
  auto s3 = ChartMetric::round_sphere_polar(3);
  for (Vec y : {pt3(0.7, 1.1, 0.3), pt3(1.9, 0.4, 2.0), pt3(1.2, 2.3, -0.5)}) {
    CurvaturePoint cp = curvature_at(s3, y);
    CHECK(cp.scalar == doctest::Approx(6.0).epsilon(1e-9));
    CHECK((cp.ricci - 2.0 * cp.g).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK((cp.schouten - 0.5 * cp.g).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("metric compatibility reconstructed from Christoffels") {
  // ∂_k g_ij = g_lj Γ^l_ki + g_il Γ^l_kj, checked by finite differences
  auto m = ChartMetric::from_strings(
      2, {"1 + y1^2 + y2^2", "y1*y2/4", "2 + sin(y1)"}, Signature{2, 0});
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  for (int rep = 0; rep < 5; ++rep) {
    Vec y = pt2(U(rng), U(rng));
    auto [g, gi] = metric_at(m, y);
    Tensor3 gam = christoffel(m, y);
    const double h = 1e-6;
    for (int k = 0; k < 2; ++k) {
      Vec yp = y, ym = y;
      yp[k] += h;
      ym[k] -= h;
      Mat dg = (metric_at(m, yp).first - metric_at(m, ym).first) / (2 * h);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double rec = 0;
          for (int l = 0; l < 2; ++l) rec += g(l, j) * gam(l, k, i) + g(i, l) * gam(l, k, j);
          CHECK(dg(i, j) == doctest::Approx(rec).epsilon(1e-6));
        }
    }
  }
}

TEST_CASE("constant-curvature Riemann pattern on S3") {
  // R^i_jkl = δ^i_k g_jl − δ^i_l g_jk for unit curvature
  auto s3 = ChartMetric::round_sphere_polar(3);
  Vec y = pt3(1.0, 0.8, 0.2);
  CurvaturePoint cp = curvature_at(s3, y);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double expect = (i == k ? cp.g(j, l) : 0.0) - (i == l ? cp.g(j, k) : 0.0);
          CHECK(cp.riemann(i, j, k, l) == doctest::Approx(expect).epsilon(1e-8));
        }
}

TEST_CASE("Schouten trace identity in three dimensions") {
  // tr_g P = R/(2(n-1)); perturbed metric keeps the identity
  auto m = ChartMetric::from_strings(
      3,
      {"1 + y2^2/8", "y1*y3/10", "0", "1 + y3^2/9", "y2/7", "1 + y1^2/6"},
      Signature{3, 0});
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int rep = 0; rep < 5; ++rep) {
    Vec y = pt3(U(rng), U(rng), U(rng));
    CurvaturePoint cp = curvature_at(m, y);
    double tr = (cp.g_inv * cp.schouten).trace();
    CHECK(tr == doctest::Approx(cp.scalar / 4.0).epsilon(1e-9));
  }
}

TEST_CASE("two-dimensional Schouten requires and validates an override") {
  auto e2 = ChartMetric::euclidean(2);
  CHECK_THROWS_AS(curvature_at(e2, pt2(0.1, 0.2)), DomainError);

  // P = 0 is consistent with the flat plane (R = 0)
  std::vector<Expr> zero(3, Expr::number(0.0, e2.vars()));
  auto ok = schouten_override(e2, zero, {pt2(0.1, 0.2), pt2(-1.0, 3.0)});
  CurvaturePoint cp = curvature_at(ok, pt2(0.5, 0.5));
  CHECK(cp.schouten.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  // P = g is rejected: trace would be 2, but R/2 = 0
  std::vector<Expr> bad = {Expr::number(1.0, e2.vars()), Expr::number(0.0, e2.vars()),
                           Expr::number(1.0, e2.vars())};
  CHECK_THROWS_AS(schouten_override(e2, bad, {pt2(0.1, 0.2)}), DomainError);
}

TEST_CASE("hyperbolic plane override P = -g/2 passes both identities") {
  auto h = ChartMetric::hyperbolic_half_plane();
  // R = -2, so tr_g P must be -1: P = -g/2 works
  std::vector<Expr> P = {Expr::parse("-1/(2*y1^2)", h.vars()), Expr::number(0.0, h.vars()),
                         Expr::parse("-1/(2*y1^2)", h.vars())};
  auto ok = schouten_override(h, P, {pt2(0.7, 0.1), pt2(1.5, -2.0)});
  CurvaturePoint cp = curvature_at(ok, pt2(0.9, 0.3));
  CHECK((cp.schouten + 0.5 * cp.g).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("singular and mis-signed metrics are rejected") {
  auto sing = ChartMetric::from_strings(2, {"y1", "0", "y1"}, Signature{2, 0});
  CHECK_THROWS_AS(metric_at(sing, pt2(0.0, 1.0)), SingularMetricError);
  CHECK_THROWS_AS(metric_at(sing, pt2(-1.0, 1.0)), SingularMetricError);  // wrong signature
  CHECK_NOTHROW(metric_at(sing, pt2(2.0, 1.0)));
}
