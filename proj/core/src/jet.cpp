#include "cgholo/jet.hpp"

#include <cmath>

#include "cgholo/error.hpp"

namespace cgholo {

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.value = a.value + b.value;
  r.grad = a.grad + b.grad;
  r.hess = a.hess + b.hess;
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.value = a.value - b.value;
  r.grad = a.grad - b.grad;
  r.hess = a.hess - b.hess;
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r(a.dim());
  r.value = -a.value;
  r.grad = -a.grad;
  r.hess = -a.hess;
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.value = a.value * b.value;
  r.grad = a.value * b.grad + b.value * a.grad;
  r.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() +
           b.grad * a.grad.transpose();
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.value == 0.0) throw DomainError("division by zero");
  return a * compose({1.0 / b.value, -1.0 / (b.value * b.value), 2.0 / (b.value * b.value * b.value)}, b);
}

Jet2 operator*(double c, const Jet2& a) {
  Jet2 r(a.dim());
  r.value = c * a.value;
  r.grad = c * a.grad;
  r.hess = c * a.hess;
  return r;
}

Jet2 compose(const std::array<double, 3>& f, const Jet2& a) {
  Jet2 r(a.dim());
  r.value = f[0];
  r.grad = f[1] * a.grad;
  r.hess = f[1] * a.hess + f[2] * (a.grad * a.grad.transpose());
  return r;
}

Jet2 sin(const Jet2& a) {
  double s = std::sin(a.value), c = std::cos(a.value);
  return compose({s, c, -s}, a);
}
Jet2 cos(const Jet2& a) {
  double s = std::sin(a.value), c = std::cos(a.value);
  return compose({c, -s, -c}, a);
}
Jet2 tan(const Jet2& a) {
  double t = std::tan(a.value);
  double d = 1.0 + t * t;
  return compose({t, d, 2.0 * t * d}, a);
}
Jet2 exp(const Jet2& a) {
  double e = std::exp(a.value);
  return compose({e, e, e}, a);
}
Jet2 log(const Jet2& a) {
  if (a.value <= 0.0) throw DomainError("log of non-positive value");
  return compose({std::log(a.value), 1.0 / a.value, -1.0 / (a.value * a.value)}, a);
}
Jet2 sqrt(const Jet2& a) {
  if (a.value <= 0.0) throw DomainError("sqrt of non-positive value");
  double s = std::sqrt(a.value);
  return compose({s, 0.5 / s, -0.25 / (s * a.value)}, a);
}
Jet2 pow(const Jet2& a, double p) {
  if (p == 0.0) return Jet2::constant(1.0, a.dim());
  double v = a.value;
  bool integral = p == std::floor(p);
  if (v == 0.0 && p < 2.0 && p != 1.0) throw DomainError("pow at zero base with exponent < 2");
  if (v < 0.0 && !integral) throw DomainError("pow of negative base with non-integer exponent");
  double f0 = std::pow(v, p);
  double f1 = (p == 1.0) ? 1.0 : p * std::pow(v, p - 1.0);
  double f2 = (p == 1.0 || p == 2.0) ? (p == 2.0 ? 2.0 : 0.0) : p * (p - 1.0) * std::pow(v, p - 2.0);
  return compose({f0, f1, f2}, a);
}

Taylor4 operator+(const Taylor4& a, const Taylor4& b) {
  Taylor4 r;
  for (int k = 0; k < 5; ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}
Taylor4 operator-(const Taylor4& a, const Taylor4& b) {
  Taylor4 r;
  for (int k = 0; k < 5; ++k) r.c[k] = a.c[k] - b.c[k];
  return r;
}
Taylor4 operator-(const Taylor4& a) {
  Taylor4 r;
  for (int k = 0; k < 5; ++k) r.c[k] = -a.c[k];
  return r;
}
Taylor4 operator*(const Taylor4& a, const Taylor4& b) {
  Taylor4 r;
  for (int k = 0; k < 5; ++k)
    for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
  return r;
}
Taylor4 operator*(double c, const Taylor4& a) {
  Taylor4 r;
  for (int k = 0; k < 5; ++k) r.c[k] = c * a.c[k];
  return r;
}
Taylor4 operator/(const Taylor4& a, const Taylor4& b) {
  if (b.c[0] == 0.0) throw DomainError("division by zero");
  // Long division of truncated series.
  Taylor4 r;
  for (int k = 0; k < 5; ++k) {
    double acc = a.c[k];
    for (int j = 0; j < k; ++j) acc -= r.c[j] * b.c[k - j];
    r.c[k] = acc / b.c[0];
  }
  return r;
}

Taylor4 compose(const std::array<double, 5>& f, const Taylor4& a) {
  // f(a) = sum_k f[k]/k! * w^k with w = a - a.value (nilpotent to order 5).
  Taylor4 w = a;
  w.c[0] = 0.0;
  static const double inv_fact[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
  Taylor4 r = Taylor4::constant(f[0]);
  Taylor4 wp = Taylor4::constant(1.0);
  for (int k = 1; k < 5; ++k) {
    wp = wp * w;
    r = r + (f[k] * inv_fact[k]) * wp;
  }
  return r;
}

Taylor4 sin(const Taylor4& a) {
  double s = std::sin(a.c[0]), c = std::cos(a.c[0]);
  return compose({s, c, -s, -c, s}, a);
}
Taylor4 cos(const Taylor4& a) {
  double s = std::sin(a.c[0]), c = std::cos(a.c[0]);
  return compose({c, -s, -c, s, c}, a);
}
Taylor4 tan(const Taylor4& a) { return sin(a) / cos(a); }
Taylor4 exp(const Taylor4& a) {
  double e = std::exp(a.c[0]);
  return compose({e, e, e, e, e}, a);
}
Taylor4 log(const Taylor4& a) {
  double v = a.c[0];
  if (v <= 0.0) throw DomainError("log of non-positive value");
  return compose({std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v)}, a);
}
Taylor4 sqrt(const Taylor4& a) { return pow(a, 0.5); }
Taylor4 pow(const Taylor4& a, double p) {
  if (p == 0.0) return Taylor4::constant(1.0);
  double v = a.c[0];
  bool integral = p == std::floor(p);
  if (v < 0.0 && !integral) throw DomainError("pow of negative base with non-integer exponent");
  std::array<double, 5> f{};
  double coef = 1.0;
  for (int k = 0; k < 5; ++k) {
    double e = p - k;
    if (coef == 0.0) break;  // integral p < k: all further derivatives vanish
    if (v == 0.0) {
      if (e < 0.0) throw DomainError("pow at zero base");
      f[k] = (e == 0.0) ? coef : 0.0;
    } else {
      f[k] = coef * std::pow(v, e);
    }
    coef *= e;
  }
  return compose(f, a);
}

}  // namespace cgholo
