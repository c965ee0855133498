#include "cgholo/hmap.hpp"

#include <cmath>

#include "cgholo/error.hpp"

namespace cgholo {

namespace {

/// (∇_γ̇ α)_i along the curve: 5-point difference of the α covector plus the
/// connection term −Γ^k_ij γ̇^j α_k.
Vec covariant_alpha_derivative(const ChartMetric& chart, const Curve& curve, double t) {
  int n = chart.dim();
  double h = 1e-4 * std::max(1.0, std::abs(t));
  Vec a[5];
  for (int k = 0; k < 5; ++k) {
    double tk = t + (k - 2) * h;
    a[k] = alpha_from_curve(chart, curve.jets(tk), tk);
  }
  Vec adot = (-a[4] + 8.0 * a[3] - 8.0 * a[1] + a[0]) / (12.0 * h);

  CurveJets j = curve.jets(t);
  Tensor3 gamma = christoffel(chart, j.gamma);
  Vec out = adot;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int jj = 0; jj < n; ++jj) out[i] -= gamma(k, i, jj) * j.d1[jj] * a[2][k];
  return out;
}

}  // namespace

ExpansionMap::ExpansionMap(std::shared_ptr<const Curve> curve,
                           std::shared_ptr<const ChartMetric> chart, int domain_sign,
                           CoefficientOverrides overrides)
    : curve_(std::move(curve)), chart_(std::move(chart)), sign_(domain_sign),
      ov_(std::move(overrides)) {
  if (!curve_ || !chart_) throw ConfigError("expansion map needs a curve and a chart");
  if (sign_ != 1 && sign_ != -1) throw ConfigError("domain_sign must be +1 or -1");
  if (curve_->dim() != chart_->dim())
    throw ConfigError("curve dimension does not match the chart");
}

ExpansionMap::Coefficients ExpansionMap::coefficients_at(double t) const {
  int n = chart_->dim();
  Coefficients c;
  c.jets = curve_->jets(t);

  Causal ch = causal_character(*chart_, c.jets.gamma, c.jets.d1);
  if (ch == Causal::Null)
    throw NullVelocityError("null velocity at t = " + std::to_string(t));
  int ch_sign = ch == Causal::Spacelike ? 1 : -1;
  if (ch_sign != sign_)
    throw DomainError("causal character of the boundary curve does not match the domain");

  auto [g, g_inv] = metric_at(*chart_, c.jets.gamma);
  double vsq = c.jets.d1.dot(g * c.jets.d1);
  c.lambda = std::sqrt(std::abs(vsq));
  c.alpha = alpha_from_curve(*chart_, c.jets, t);
  c.alpha_sharp = g_inv * c.alpha;
  c.alpha_sq = c.alpha.dot(c.alpha_sharp);

  c.x1 = c.lambda + ov_.x1_shift;
  c.x2 = ov_.x2;
  c.x3 = -0.25 * c.lambda * c.lambda * c.lambda * c.alpha_sq + ov_.x3_shift;
  c.v0 = ov_.v0;
  c.y2 = 0.5 * c.lambda * c.lambda * c.alpha_sharp;
  if (ov_.y2_shift) c.y2 += *ov_.y2_shift;
  if (ov_.y3_field)
    c.y3 = ov_.y3_field->jets(t).gamma;
  else
    c.y3 = ov_.y3 ? *ov_.y3 : Vec::Zero(n);
  c.v = ov_.v ? *ov_.v : Vec::Zero(n);
  return c;
}

ExpansionMap::Slice ExpansionMap::slice_at(double t) const {
  double h = 1e-4 * std::max(1.0, std::abs(t));

  Coefficients c[5];
  for (int k = 0; k < 5; ++k) c[k] = coefficients_at(t + (k - 2) * h);

  auto d1c = [&](auto&& get) -> Vec {
    return (-get(c[4]) + 8.0 * get(c[3]) - 8.0 * get(c[1]) + get(c[0])) / (12.0 * h);
  };
  auto d2c = [&](auto&& get) -> Vec {
    return (-get(c[4]) + 16.0 * get(c[3]) - 30.0 * get(c[2]) + 16.0 * get(c[1]) - get(c[0])) /
           (12.0 * h * h);
  };
  auto d1s = [&](auto&& get) {
    return (-get(c[4]) + 8.0 * get(c[3]) - 8.0 * get(c[1]) + get(c[0])) / (12.0 * h);
  };
  auto d2s = [&](auto&& get) {
    return (-get(c[4]) + 16.0 * get(c[3]) - 30.0 * get(c[2]) + 16.0 * get(c[1]) - get(c[0])) /
           (12.0 * h * h);
  };

  Slice sl;
  sl.c = c[2];
  sl.x1p = d1s([](const Coefficients& q) { return q.x1; });
  sl.x2p = d1s([](const Coefficients& q) { return q.x2; });
  sl.x3p = d1s([](const Coefficients& q) { return q.x3; });
  sl.v0p = d1s([](const Coefficients& q) { return q.v0; });
  sl.x1pp = d2s([](const Coefficients& q) { return q.x1; });
  sl.x2pp = d2s([](const Coefficients& q) { return q.x2; });
  sl.x3pp = d2s([](const Coefficients& q) { return q.x3; });
  sl.v0pp = d2s([](const Coefficients& q) { return q.v0; });
  sl.y2p = d1c([](const Coefficients& q) -> const Vec& { return q.y2; });
  sl.y3p = d1c([](const Coefficients& q) -> const Vec& { return q.y3; });
  sl.vp = d1c([](const Coefficients& q) -> const Vec& { return q.v; });
  sl.y2pp = d2c([](const Coefficients& q) -> const Vec& { return q.y2; });
  sl.y3pp = d2c([](const Coefficients& q) -> const Vec& { return q.y3; });
  sl.vpp = d2c([](const Coefficients& q) -> const Vec& { return q.v; });
  return sl;
}

MapJet ExpansionMap::eval_slice(const Slice& sl, double s) const {
  if (s <= 0.0) throw DomainError("s must be positive");
  int n = chart_->dim();
  const Coefficients& c0 = sl.c;

  double L = std::log(s);
  double s2 = s * s, s3 = s2 * s;
  // shape functions multiplying (x1, x2, x3, v0) in u⁰ and their s-derivatives
  double f1 = s, f2 = s2, f3 = s3, fL = s3 * L;
  double df1 = 1, df2 = 2 * s, df3 = 3 * s2, dfL = 3 * s2 * L + s2;
  double ddf1 = 0, ddf2 = 2, ddf3 = 6 * s, ddfL = 6 * s * L + 5 * s;

  MapJet mj;
  mj.u = Vec(n + 1);
  mj.du_ds = Vec(n + 1);
  mj.du_dt = Vec(n + 1);
  mj.d2_ss = Vec(n + 1);
  mj.d2_tt = Vec(n + 1);
  mj.d2_st = Vec(n + 1);

  // u⁰ block
  mj.u[0] = f1 * c0.x1 + f2 * c0.x2 + f3 * c0.x3 + fL * c0.v0;
  mj.du_ds[0] = df1 * c0.x1 + df2 * c0.x2 + df3 * c0.x3 + dfL * c0.v0;
  mj.d2_ss[0] = ddf1 * c0.x1 + ddf2 * c0.x2 + ddf3 * c0.x3 + ddfL * c0.v0;
  mj.du_dt[0] = f1 * sl.x1p + f2 * sl.x2p + f3 * sl.x3p + fL * sl.v0p;
  mj.d2_tt[0] = f1 * sl.x1pp + f2 * sl.x2pp + f3 * sl.x3pp + fL * sl.v0pp;
  mj.d2_st[0] = df1 * sl.x1p + df2 * sl.x2p + df3 * sl.x3p + dfL * sl.v0p;

  // y block: γ exact, coefficient functions by differences
  mj.u.segment(1, n) = c0.jets.gamma + f2 * c0.y2 + f3 * c0.y3 + fL * c0.v;
  mj.du_ds.segment(1, n) = df2 * c0.y2 + df3 * c0.y3 + dfL * c0.v;
  mj.d2_ss.segment(1, n) = ddf2 * c0.y2 + ddf3 * c0.y3 + ddfL * c0.v;
  mj.du_dt.segment(1, n) = c0.jets.d1 + f2 * sl.y2p + f3 * sl.y3p + fL * sl.vp;
  mj.d2_tt.segment(1, n) = c0.jets.d2 + f2 * sl.y2pp + f3 * sl.y3pp + fL * sl.vpp;
  mj.d2_st.segment(1, n) = df2 * sl.y2p + df3 * sl.y3p + dfL * sl.vp;
  return mj;
}

namespace {

Vec gamma_quad(const Tensor3& gamma, const Vec& a, const Vec& b) {
  int N = gamma.dim();
  Vec r = Vec::Zero(N);
  for (int I = 0; I < N; ++I)
    for (int J = 0; J < N; ++J)
      for (int K = 0; K < N; ++K) r[I] += gamma(I, J, K) * a[J] * b[K];
  return r;
}

Tensor3 ambient_gamma_at(const ExpansionMap& m, const AmbientMetric& ambient, const MapJet& mj) {
  int n = m.dim();
  if (mj.u[0] <= 0.0) throw DomainError("map exits the target chart (u0 <= 0)");
  return ambient.christoffel_gplus(mj.u[0], mj.u.segment(1, n));
}

}  // namespace

Vec tension(const ExpansionMap& m, const AmbientMetric& ambient, double s, double t) {
  MapJet mj = m.eval(s, t);
  Tensor3 gamma = ambient_gamma_at(m, ambient, mj);
  double e = static_cast<double>(m.domain_sign());
  Vec q = gamma_quad(gamma, mj.du_ds, mj.du_ds) + e * gamma_quad(gamma, mj.du_dt, mj.du_dt);
  return s * s * (mj.d2_ss + e * mj.d2_tt + q);
}

SffComponents second_fundamental_form(const ExpansionMap& m, const AmbientMetric& ambient,
                                      double s, double t) {
  MapJet mj = m.eval(s, t);
  Tensor3 gamma = ambient_gamma_at(m, ambient, mj);
  double e = static_cast<double>(m.domain_sign());
  SffComponents r;
  // Γ^s_ss = −1/s, Γ^s_tt = ±1/s, Γ^t_st = −1/s
  r.ss = mj.d2_ss + mj.du_ds / s + gamma_quad(gamma, mj.du_ds, mj.du_ds);
  r.tt = mj.d2_tt - e * mj.du_ds / s + gamma_quad(gamma, mj.du_dt, mj.du_dt);
  r.st = mj.d2_st + mj.du_dt / s + gamma_quad(gamma, mj.du_ds, mj.du_dt);
  return r;
}

SffLeading sff_leading_coefficients(const ChartMetric& chart, const Curve& curve, double t,
                                    int domain_sign, double x3, const Vec& y3) {
  CurveJets j = curve.jets(t);
  CurvaturePoint cp = curvature_at(chart, j.gamma);
  const Vec& v = j.d1;
  double vsq = v.dot(cp.g * v);
  if (std::abs(vsq) < 1e-10 * std::max(1.0, v.squaredNorm()))
    throw NullVelocityError("null velocity at t = " + std::to_string(t));
  double lambda = std::sqrt(std::abs(vsq));
  Vec alpha = alpha_from_curve(chart, j, t);
  Vec alpha_sharp = cp.g_inv * alpha;
  double alpha_sq = alpha.dot(alpha_sharp);
  double av = alpha.dot(v);
  double l2 = lambda * lambda, l3 = l2 * lambda;

  Vec nabla_alpha = covariant_alpha_derivative(chart, curve, t);
  Vec nabla_alpha_sharp = cp.g_inv * nabla_alpha;
  Vec Pv_sharp = cp.g_inv * (cp.schouten * v);

  double e = static_cast<double>(domain_sign);
  SffLeading r;
  r.ss0 = 4.0 * x3 + l3 * alpha_sq;
  r.tt0 = -e * r.ss0;
  r.st0 = 3.0 / lambda * v.dot(cp.g * y3);
  r.ssi = 3.0 * y3;
  r.tti = -e * 3.0 * y3;
  r.sti = -2.0 / lambda * x3 * v + l2 * nabla_alpha_sharp - l2 * av * alpha_sharp -
          l2 * Pv_sharp;
  return r;
}

PullbackComponents pullback(const ExpansionMap& m, const AmbientMetric& ambient, double s,
                            double t) {
  MapJet mj = m.eval(s, t);
  int n = m.dim();
  if (mj.u[0] <= 0.0) throw DomainError("map exits the target chart (u0 <= 0)");
  Mat G = ambient.gplus_at(mj.u[0], mj.u.segment(1, n));
  double e = static_cast<double>(m.domain_sign());
  PullbackComponents r;
  r.ss = mj.du_ds.dot(G * mj.du_ds) - 1.0 / (s * s);
  r.st = mj.du_ds.dot(G * mj.du_dt);
  r.tt = mj.du_dt.dot(G * mj.du_dt) - e / (s * s);
  return r;
}

double pullback_tt_limit(const ChartMetric& chart, const Curve& curve, double t,
                         int domain_sign, double x3) {
  CurveJets j = curve.jets(t);
  CurvaturePoint cp = curvature_at(chart, j.gamma);
  const Vec& v = j.d1;
  double vsq = v.dot(cp.g * v);
  double lambda = std::sqrt(std::abs(vsq));
  Vec alpha = alpha_from_curve(chart, j, t);
  double av = alpha.dot(v);

  // ∂_tλ = sign(|γ̇|²)·⟨γ̇, ∇_γ̇γ̇⟩/λ
  Vec acc_cov = j.d2;
  {
    int n = chart.dim();
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc_cov[i] += cp.gamma(i, a, b) * v[a] * v[b];
  }
  double dlambda = (vsq > 0 ? 1.0 : -1.0) * v.dot(cp.g * acc_cov) / lambda;

  Vec nabla_alpha = covariant_alpha_derivative(chart, curve, t);
  double na_vv = nabla_alpha.dot(v);
  double Pvv = v.dot(cp.schouten * v);
  double e = static_cast<double>(domain_sign);
  double l2 = lambda * lambda;
  return (dlambda * dlambda - e * 2.0 * lambda * x3 + 2.0 * lambda * dlambda * av +
          l2 * na_vv - l2 * Pvv) /
         l2;
}

}  // namespace cgholo
