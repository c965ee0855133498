#include "cgholo/geodesic.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "cgholo/error.hpp"

namespace cgholo {

namespace {

const std::vector<std::string> kCurveVar = {"t"};

double g_dot(const Mat& g, const Vec& a, const Vec& b) { return a.dot(g * b); }

/// ∂_k g_ij reconstructed from metric compatibility:
/// ∂_k g_ij = g_lj Γ^l_ki + g_il Γ^l_kj.
Tensor3 dg_from_gamma(const Mat& g, const Tensor3& gamma) {
  int n = static_cast<int>(g.rows());
  Tensor3 dg(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += g(l, j) * gamma(l, k, i) + g(i, l) * gamma(l, k, j);
        dg(i, j, k) = acc;
      }
  return dg;
}

Vec apply_gamma(const Tensor3& gamma, const Vec& u, const Vec& w) {
  int n = gamma.dim();
  Vec r = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r[i] += gamma(i, j, k) * u[j] * w[k];
  return r;
}

Vec apply_dgamma(const Tensor4& dgamma, const Vec& v) {
  int n = dgamma.dim();
  Vec r = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) r[i] += dgamma(i, j, k, l) * v[j] * v[k] * v[l];
  return r;
}

bool velocity_null(const Mat& g, const Vec& v) {
  double q = g_dot(g, v, v);
  return std::abs(q) < 1e-10 * std::max(1.0, v.squaredNorm());
}

/// γ⃛ in coordinates from the value of the covariant jerk.
Vec coord_jerk_from_covariant(const CurvaturePoint& cp, const Vec& v, const Vec& w_coord,
                              const Vec& acc_cov, const Vec& jerk_cov) {
  return jerk_cov - apply_dgamma(cp.dgamma, v) - 2.0 * apply_gamma(cp.gamma, w_coord, v) -
         apply_gamma(cp.gamma, v, acc_cov);
}

/// Covariant jerk demanded by the reduced third-order equation (residual 0).
Vec reduced_equation_jerk(const CurvaturePoint& cp, const Vec& v, const Vec& acc_cov) {
  double vsq = g_dot(cp.g, v, v);
  Vec Pv = cp.schouten * v;  // P_ij v^j as covector
  Vec Pv_sharp = cp.g_inv * Pv;
  return 3.0 * g_dot(cp.g, v, acc_cov) / vsq * acc_cov -
         1.5 * g_dot(cp.g, acc_cov, acc_cov) / vsq * v - 2.0 * v.dot(Pv) * v + vsq * Pv_sharp;
}

}  // namespace

ExprCurve::ExprCurve(std::vector<Expr> components) : comp_(std::move(components)) {
  if (comp_.empty()) throw ConfigError("curve needs at least one component");
}

ExprCurve ExprCurve::from_strings(const std::vector<std::string>& components) {
  std::vector<Expr> comp;
  comp.reserve(components.size());
  for (const auto& s : components) comp.push_back(Expr::parse(s, kCurveVar));
  return ExprCurve(std::move(comp));
}

CurveJets ExprCurve::jets(double t) const {
  int n = dim();
  CurveJets j{Vec(n), Vec(n), Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    Taylor4 tj = comp_[i].eval_taylor4(t);
    j.gamma[i] = tj.value();
    j.d1[i] = tj.d1();
    j.d2[i] = tj.d2();
    j.d3[i] = tj.d3();
  }
  return j;
}

ExprCurve ExprCurve::reparametrized(const Expr& f) const {
  std::vector<Expr> comp;
  comp.reserve(comp_.size());
  for (const auto& c : comp_) comp.push_back(c.substitute("t", f));
  return ExprCurve(std::move(comp));
}

Causal causal_character(const ChartMetric& chart, const Vec& y, const Vec& v) {
  Mat g = metric_at(chart, y).first;
  double q = g_dot(g, v, v);
  if (std::abs(q) < 1e-10 * std::max(1.0, v.squaredNorm())) return Causal::Null;
  return q > 0 ? Causal::Spacelike : Causal::Timelike;
}

Vec alpha_from_curve(const ChartMetric& chart, const CurveJets& j, double t) {
  auto [g, g_inv] = metric_at(chart, j.gamma);
  (void)g_inv;
  Tensor3 gamma = christoffel(chart, j.gamma);
  if (velocity_null(g, j.d1))
    throw NullVelocityError("null velocity at t = " + std::to_string(t));
  Vec acc_cov = j.d2 + apply_gamma(gamma, j.d1, j.d1);
  double vsq = g_dot(g, j.d1, j.d1);
  Vec alpha_sharp = (acc_cov - 2.0 * g_dot(g, j.d1, acc_cov) / vsq * j.d1) / vsq;
  return g * alpha_sharp;
}

Vec pack_cg_state(const CGState& s) {
  int n = static_cast<int>(s.gamma.size());
  Vec p(3 * n);
  p.segment(0, n) = s.gamma;
  p.segment(n, n) = s.v;
  p.segment(2 * n, n) = s.a;
  return p;
}

CGState unpack_cg_state(double t, const Vec& packed) {
  int n = static_cast<int>(packed.size()) / 3;
  CGState s;
  s.t = t;
  s.gamma = packed.segment(0, n);
  s.v = packed.segment(n, n);
  s.a = packed.segment(2 * n, n);
  return s;
}

Vec cg_rhs_first_order(const ChartMetric& chart, const CGState& s) {
  CurvaturePoint cp = curvature_at(chart, s.gamma);
  int n = chart.dim();
  const Vec& v = s.v;
  const Vec& a = s.a;
  Vec alpha_sharp = cp.g_inv * a;
  double av = a.dot(v);
  double vsq = g_dot(cp.g, v, v);
  double asq = a.dot(alpha_sharp);

  Vec dv = -apply_gamma(cp.gamma, v, v) - 2.0 * av * v + vsq * alpha_sharp;

  // ȧ_i = P_ij v^j + α(v) a_i − ½|α|² g_ij v^j + Γ^k_ij v^j a_k
  Vec da = cp.schouten * v + av * a - 0.5 * asq * (cp.g * v);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) da[i] += cp.gamma(k, i, j) * v[j] * a[k];

  Vec out(3 * n);
  out.segment(0, n) = v;
  out.segment(n, n) = dv;
  out.segment(2 * n, n) = da;
  return out;
}

Vec cg_residual_third_order(const ChartMetric& chart, const CurveJets& j, double t) {
  CurvaturePoint cp = curvature_at(chart, j.gamma);
  if (velocity_null(cp.g, j.d1))
    throw NullVelocityError("null velocity at t = " + std::to_string(t));
  const Vec& v = j.d1;
  Vec acc_cov = j.d2 + apply_gamma(cp.gamma, v, v);
  // covariant jerk: d/dt of acc_cov plus the connection term
  Vec jerk_cov = j.d3 + apply_dgamma(cp.dgamma, v) + 2.0 * apply_gamma(cp.gamma, j.d2, v) +
                 apply_gamma(cp.gamma, v, acc_cov);
  return jerk_cov - reduced_equation_jerk(cp, v, acc_cov);
}

Trajectory::Trajectory(std::shared_ptr<const ChartMetric> chart, OdeSolution sol, int n,
                       Form form)
    : chart_(std::move(chart)), sol_(std::move(sol)), n_(n), form_(form) {}

CGState Trajectory::state_at(double t) const {
  Vec p = sol_.at(t);
  CGState s = unpack_cg_state(t, p);
  if (form_ == Form::ThirdOrder) {
    // packed state is (γ, γ̇, γ̈); recover α from the curve data
    CurveJets j{s.gamma, s.v, s.a, Vec::Zero(n_)};
    s.a = alpha_from_curve(*chart_, j, t);
  }
  return s;
}

CurveJets Trajectory::jets(double t) const {
  Vec p = sol_.at(t);
  CGState s = unpack_cg_state(t, p);
  CurvaturePoint cp = curvature_at(*chart_, s.gamma);
  int n = n_;
  CurveJets j{s.gamma, s.v, Vec(n), Vec(n)};

  if (form_ == Form::ThirdOrder) {
    const Vec& w = s.a;  // here the third block holds γ̈ in coordinates
    j.d2 = w;
    Vec acc_cov = w + apply_gamma(cp.gamma, s.v, s.v);
    Vec jerk_cov = reduced_equation_jerk(cp, s.v, acc_cov);
    j.d3 = coord_jerk_from_covariant(cp, s.v, w, acc_cov, jerk_cov);
    return j;
  }

  Vec rhs = cg_rhs_first_order(*chart_, s);
  Vec acc = rhs.segment(n, n);
  Vec da = rhs.segment(2 * n, n);
  j.d2 = acc;

  // differentiate v'^i = −Γ^i_jk v^j v^k − 2α(v)v^i + |v|²α^♯i along the curve
  const Vec& v = s.v;
  const Vec& a = s.a;
  Vec alpha_sharp = cp.g_inv * a;
  double av = a.dot(v);
  double vsq = g_dot(cp.g, v, v);

  Tensor3 dg = dg_from_gamma(cp.g, cp.gamma);
  double dvsq = 2.0 * g_dot(cp.g, acc, v);
  Vec dalpha_sharp = cp.g_inv * da;
  for (int i = 0; i < n; ++i) {
    for (int j2 = 0; j2 < n; ++j2)
      for (int k = 0; k < n; ++k) {
        dvsq += dg(j2, k, i) * v[i] * v[j2] * v[k];
        // ∂_l g^{ij} = −g^{ia} ∂_l g_ab g^{bj}
      }
  }
  {
    // d/dt g^{ij} a_j = (∂_l g^{ij}) v^l a_j + g^{ij} ȧ_j
    Mat dginv_dt = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j2 = 0; j2 < n; ++j2) {
        double acc2 = 0.0;
        for (int A = 0; A < n; ++A)
          for (int B = 0; B < n; ++B)
            for (int l = 0; l < n; ++l)
              acc2 -= cp.g_inv(i, A) * dg(A, B, l) * v[l] * cp.g_inv(B, j2);
        dginv_dt(i, j2) = acc2;
      }
    dalpha_sharp += dginv_dt * a;
  }

  Vec d3 = -apply_dgamma(cp.dgamma, v) - 2.0 * apply_gamma(cp.gamma, acc, v);
  d3 += -2.0 * (da.dot(v) + a.dot(acc)) * v - 2.0 * av * acc;
  d3 += dvsq * alpha_sharp + vsq * dalpha_sharp;
  j.d3 = d3;
  return j;
}

namespace {

OdeMonitor causal_monitor(const std::shared_ptr<const ChartMetric>& chart, const CGState& s0) {
  Mat g0 = metric_at(*chart, s0.gamma).first;
  double q0 = g_dot(g0, s0.v, s0.v);
  double scale0 = std::max(1.0, s0.v.squaredNorm());
  int sign0 = std::abs(q0) < 1e-10 * scale0 ? 0 : (q0 > 0 ? 1 : -1);
  auto chart_copy = chart;
  return [chart_copy, sign0](double t, const Vec& y) {
    CGState s = unpack_cg_state(t, y);
    Mat g = metric_at(*chart_copy, s.gamma).first;
    double q = g_dot(g, s.v, s.v);
    double band = 1e-6 * std::max(1.0, s.v.squaredNorm());
    bool flipped = (sign0 > 0 && q < -band) || (sign0 < 0 && q > band) ||
                   (sign0 == 0 && std::abs(q) > band);
    if (flipped)
      throw Error("causal character of the velocity flipped at t = " + std::to_string(t));
  };
}

}  // namespace

Trajectory integrate_cg(const std::shared_ptr<const ChartMetric>& chart, const CGState& s0,
                        double t_final, double tol) {
  auto rhs = [chart](double, const Vec& y) {
    return cg_rhs_first_order(*chart, unpack_cg_state(0.0, y));
  };
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = tol;
  OdeSolution sol =
      integrate_ode(rhs, s0.t, t_final, pack_cg_state(s0), opt, causal_monitor(chart, s0));
  return Trajectory(chart, std::move(sol), chart->dim());
}

Trajectory integrate_cg_third_order(const std::shared_ptr<const ChartMetric>& chart,
                                    const CurveJets& init, double t0, double t_final,
                                    double tol) {
  int n = chart->dim();
  auto rhs = [chart, n](double, const Vec& y) {
    Vec g = y.segment(0, n), v = y.segment(n, n), w = y.segment(2 * n, n);
    CurvaturePoint cp = curvature_at(*chart, g);
    if (velocity_null(cp.g, v)) throw NullVelocityError("null velocity during integration");
    Vec acc_cov = w + apply_gamma(cp.gamma, v, v);
    Vec jerk_cov = reduced_equation_jerk(cp, v, acc_cov);
    Vec d3 = coord_jerk_from_covariant(cp, v, w, acc_cov, jerk_cov);
    Vec out(3 * n);
    out.segment(0, n) = v;
    out.segment(n, n) = w;
    out.segment(2 * n, n) = d3;
    return out;
  };
  Vec y0(3 * n);
  y0.segment(0, n) = init.gamma;
  y0.segment(n, n) = init.d1;
  y0.segment(2 * n, n) = init.d2;
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = tol;
  OdeSolution sol = integrate_ode(rhs, t0, t_final, y0, opt);
  return Trajectory(chart, std::move(sol), n, Trajectory::Form::ThirdOrder);
}

Mobius Mobius::make(double a, double b, double c, double d) {
  double det = a * d - b * c;
  if (det == 0.0) throw DomainError("degenerate coefficient matrix");
  double s = 1.0 / std::sqrt(std::abs(det));
  return Mobius{a * s, b * s, c * s, d * s};
}

double Mobius::apply(double t) const {
  double den = c * t + d;
  if (den == 0.0) throw DomainError("pole at t = " + std::to_string(t));
  return (a * t + b) / den;
}

bool Mobius::pole_in(double lo, double hi) const {
  if (c == 0.0) return false;
  double p = -d / c;
  return p >= lo && p <= hi;
}

Expr Mobius::as_expr() const {
  Expr t = Expr::var("t", kCurveVar);
  return (a * t + Expr::number(b, kCurveVar)) / (c * t + Expr::number(d, kCurveVar));
}

double schwarzian_numeric(const Expr& f, double t, double h) {
  auto at = [&](double x) {
    Vec p(1);
    p[0] = x;
    return f.eval(p);
  };
  double f1 = (-at(t + 2 * h) + 8 * at(t + h) - 8 * at(t - h) + at(t - 2 * h)) / (12 * h);
  double f2 = (-at(t + 2 * h) + 16 * at(t + h) - 30 * at(t) + 16 * at(t - h) - at(t - 2 * h)) /
              (12 * h * h);
  double f3 = (at(t + 2 * h) - 2 * at(t + h) + 2 * at(t - h) - at(t - 2 * h)) / (2 * h * h * h);
  double r = f2 / f1;
  return f3 / f1 - 1.5 * r * r;
}

bool schwarzian_is_zero(const Mobius& f, double lo, double hi) {
  Expr e = f.as_expr();
  for (int i = 0; i < 5; ++i) {
    double t = lo + (hi - lo) * i / 4.0;
    if (f.c != 0.0 && std::abs(f.c * t + f.d) < 1e-2) continue;  // too near the pole
    if (std::abs(schwarzian_numeric(e, t)) > 1e-3) return false;
  }
  return true;
}

ReparamReport reparametrization_check(const ChartMetric& chart, const ExprCurve& curve,
                                      const Expr& f, const std::vector<double>& samples,
                                      double input_tol, double mapped_tol) {
  ReparamReport rep;
  for (double t : samples) {
    double r = cg_residual_third_order(chart, curve.jets(t), t).norm();
    rep.max_residual_input = std::max(rep.max_residual_input, r);
  }
  if (rep.max_residual_input > input_tol)
    throw DomainError("input curve fails the conformal geodesic residual precondition");
  ExprCurve mapped = curve.reparametrized(f);
  for (double t : samples) {
    double r = cg_residual_third_order(chart, mapped.jets(t), t).norm();
    rep.max_residual_mapped = std::max(rep.max_residual_mapped, r);
  }
  rep.pass = rep.max_residual_mapped < mapped_tol;
  return rep;
}

void write_trajectory_csv(std::ostream& out, const ChartMetric& chart, const Trajectory& traj,
                          const std::vector<double>& sample_times) {
  int n = traj.dim();
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",gamma" << i;
  for (int i = 1; i <= n; ++i) out << ",v" << i;
  for (int i = 1; i <= n; ++i) out << ",a" << i;
  out << ",residual_norm\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (double t : sample_times) {
    CGState s = traj.state_at(t);
    double rn;
    try {
      rn = cg_residual_third_order(chart, traj.jets(t), t).norm();
    } catch (const NullVelocityError&) {
      rn = std::nan("");
    }
    put(t);
    for (int i = 0; i < n; ++i) { out << ','; put(s.gamma[i]); }
    for (int i = 0; i < n; ++i) { out << ','; put(s.v[i]); }
    for (int i = 0; i < n; ++i) { out << ','; put(s.a[i]); }
    out << ',';
    put(rn);
    out << '\n';
  }
}

}  // namespace cgholo
