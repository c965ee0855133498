#include "doctest.h"

#include <cmath>
#include <random>

#include "cgholo/error.hpp"
#include "cgholo/jet.hpp"

using namespace cgholo;

TEST_CASE("jet2 arithmetic identities") {
  Jet2 x = Jet2::variable(1.3, 0, 2);
  Jet2 y = Jet2::variable(0.4, 1, 2);
  // d(xy) = y dx + x dy, hessian offdiag 1
  Jet2 p = x * y;
  CHECK(p.value == doctest::Approx(0.52));
  CHECK(p.grad[0] == doctest::Approx(0.4));
  CHECK(p.grad[1] == doctest::Approx(1.3));
  CHECK(p.hess(0, 1) == doctest::Approx(1.0));
  // 1/x has grad -1/x^2, hess 2/x^3
  Jet2 inv = Jet2::constant(1.0, 2) / x;
  CHECK(inv.grad[0] == doctest::Approx(-1.0 / (1.3 * 1.3)));
  CHECK(inv.hess(0, 0) == doctest::Approx(2.0 / (1.3 * 1.3 * 1.3)));
}

TEST_CASE("jet2 functions against finite differences") {
  auto f = [](const Jet2& a) { return sin(a) * exp(a) + pow(a, 2.5) / tan(a); };
  auto fval = [](double v) { return std::sin(v) * std::exp(v) + std::pow(v, 2.5) / std::tan(v); };
  double v = 0.8;
  Jet2 j = f(Jet2::variable(v, 0, 1));
  const double h = 1e-5;
  CHECK(j.value == doctest::Approx(fval(v)));
  CHECK(j.grad[0] == doctest::Approx((fval(v + h) - fval(v - h)) / (2 * h)).epsilon(1e-7));
  CHECK(j.hess(0, 0) ==
        doctest::Approx((fval(v + h) - 2 * fval(v) + fval(v - h)) / (h * h)).epsilon(1e-4));
}

TEST_CASE("jet2 domain errors") {
  Jet2 zero = Jet2::constant(0.0, 1);
  CHECK_THROWS_AS(log(zero), DomainError);
  CHECK_THROWS_AS(sqrt(Jet2::constant(-1.0, 1)), DomainError);
  CHECK_THROWS_AS(Jet2::constant(1.0, 1) / zero, DomainError);
}

TEST_CASE("taylor4 basics") {
  Taylor4 t = Taylor4::variable(2.0);
  Taylor4 f = t * t * t;  // t^3: value 8, d1 12, d2 12, d3 6, d4 0
  CHECK(f.value() == doctest::Approx(8.0));
  CHECK(f.d1() == doctest::Approx(12.0));
  CHECK(f.d2() == doctest::Approx(12.0));
  CHECK(f.d3() == doctest::Approx(6.0));
  CHECK(f.d4() == doctest::Approx(0.0));

  Taylor4 g = Taylor4::constant(1.0) / (Taylor4::constant(1.0) + t * t);
  // d/dt 1/(1+t^2) = -2t/(1+t^2)^2 at t=2: -4/25
  CHECK(g.value() == doctest::Approx(0.2));
  CHECK(g.d1() == doctest::Approx(-4.0 / 25.0));
}

TEST_CASE("taylor4 transcendental chain against closed forms") {
  // f(t) = exp(sin(t)) at t0 = 0.5
  double t0 = 0.5;
  Taylor4 f = exp(sin(Taylor4::variable(t0)));
  double s = std::sin(t0), c = std::cos(t0), E = std::exp(s);
  CHECK(f.value() == doctest::Approx(E));
  CHECK(f.d1() == doctest::Approx(E * c));
  CHECK(f.d2() == doctest::Approx(E * (c * c - s)));
  CHECK(f.d3() == doctest::Approx(E * (c * c * c - 3 * s * c - c)));
}

TEST_CASE("taylor4 pow handles integer exponents at zero base") {
  Taylor4 t;  // base value zero, derivative 1
  t.c[1] = 1.0;
  Taylor4 f = pow(t, 3.0);
  CHECK(f.c[0] == doctest::Approx(0.0));
  CHECK(f.c[1] == doctest::Approx(0.0));
  CHECK(f.c[2] == doctest::Approx(0.0));
  CHECK(f.c[3] == doctest::Approx(1.0));
  CHECK_THROWS_AS(pow(t, -1.0), DomainError);
}

TEST_CASE("taylor4 affine reparametrization chain rule") {
  // g(t) = f(a t + b): g^(k)(t0) = a^k f^(k)(a t0 + b)
  double a = 1.7, b = -0.3, t0 = 0.9;
  Taylor4 inner = a * Taylor4::variable(t0) + Taylor4::constant(b);
  Taylor4 g = sin(inner) * exp(inner);
  Taylor4 f = sin(Taylor4::variable(a * t0 + b)) * exp(Taylor4::variable(a * t0 + b));
  CHECK(g.value() == doctest::Approx(f.value()));
  CHECK(g.d1() == doctest::Approx(a * f.d1()));
  CHECK(g.d2() == doctest::Approx(a * a * f.d2()));
  CHECK(g.d3() == doctest::Approx(a * a * a * f.d3()));
  CHECK(g.d4() == doctest::Approx(a * a * a * a * f.d4()));
}

TEST_CASE("taylor4 division and sqrt consistency") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  for (int i = 0; i < 20; ++i) {
    double t0 = U(rng);
    Taylor4 t = Taylor4::variable(t0);
    Taylor4 lhs = sqrt(t) * sqrt(t);
    for (int k = 0; k < 5; ++k) CHECK(lhs.c[k] == doctest::Approx(t.c[k]).epsilon(1e-12));
    Taylor4 one = t / t;
    CHECK(one.c[0] == doctest::Approx(1.0));
    for (int k = 1; k < 5; ++k) CHECK(one.c[k] == doctest::Approx(0.0));
  }
}
