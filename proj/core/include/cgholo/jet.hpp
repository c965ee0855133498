#pragma once

#include <array>

#include "cgholo/types.hpp"

namespace cgholo {

/// Second-order multivariate jet: value, gradient and (symmetric) Hessian of a
/// scalar function of n variables at a point. Arithmetic on Jet2 propagates
/// derivatives exactly to roundoff; no finite differences are involved.
struct Jet2 {
  double value = 0.0;
  Vec grad;
  Mat hess;

  Jet2() = default;
  explicit Jet2(int n) : value(0.0), grad(Vec::Zero(n)), hess(Mat::Zero(n, n)) {}

  static Jet2 constant(double c, int n) {
    Jet2 j(n);
    j.value = c;
    return j;
  }
  static Jet2 variable(double x, int index, int n) {
    Jet2 j(n);
    j.value = x;
    j.grad[index] = 1.0;
    return j;
  }
  int dim() const { return static_cast<int>(grad.size()); }
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator*(double c, const Jet2& a);

/// Applies a scalar function given by (f(v), f'(v), f''(v)) at v = a.value.
Jet2 compose(const std::array<double, 3>& f, const Jet2& a);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 pow(const Jet2& a, double p);

/// Degree-4 truncated Taylor polynomial of a univariate function at a base
/// point: f(t0 + h) = c[0] + c[1] h + ... + c[4] h^4 + O(h^5), so the k-th
/// derivative at t0 equals k! c[k].
struct Taylor4 {
  std::array<double, 5> c{};

  static Taylor4 constant(double v) {
    Taylor4 t;
    t.c[0] = v;
    return t;
  }
  static Taylor4 variable(double t0) {
    Taylor4 t;
    t.c[0] = t0;
    t.c[1] = 1.0;
    return t;
  }
  double value() const { return c[0]; }
  double d1() const { return c[1]; }
  double d2() const { return 2.0 * c[2]; }
  double d3() const { return 6.0 * c[3]; }
  double d4() const { return 24.0 * c[4]; }
};

Taylor4 operator+(const Taylor4& a, const Taylor4& b);
Taylor4 operator-(const Taylor4& a, const Taylor4& b);
Taylor4 operator-(const Taylor4& a);
Taylor4 operator*(const Taylor4& a, const Taylor4& b);
Taylor4 operator/(const Taylor4& a, const Taylor4& b);
Taylor4 operator*(double c, const Taylor4& a);

/// Applies a scalar function with derivatives f[k] = f^(k)(a.value), k = 0..4.
Taylor4 compose(const std::array<double, 5>& f, const Taylor4& a);

Taylor4 sin(const Taylor4& a);
Taylor4 cos(const Taylor4& a);
Taylor4 tan(const Taylor4& a);
Taylor4 exp(const Taylor4& a);
Taylor4 log(const Taylor4& a);
Taylor4 sqrt(const Taylor4& a);
Taylor4 pow(const Taylor4& a, double p);

}  // namespace cgholo
