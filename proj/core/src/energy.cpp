#include "cgholo/energy.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "cgholo/error.hpp"

namespace cgholo {

namespace {

void gauss_legendre(int N, std::vector<double>& xs, std::vector<double>& ws) {
  xs.assign(N, 0.0);
  ws.assign(N, 0.0);
  for (int i = 0; i < (N + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= N; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = N * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    xs[i] = -x;
    xs[N - 1 - i] = x;
    ws[i] = ws[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

/// Tensor-product panel quadrature of f(w, t) over [w0,w1]×[t0,t1] with
/// doubling until 1e-9 agreement.
template <class F>
double adaptive_quad_2d(const F& f, double w0, double w1, double t0, double t1) {
  std::vector<double> xs, ws;
  gauss_legendre(10, xs, ws);
  double prev = 0.0;
  for (int level = 0; level < 8; ++level) {
    int pw = 4 << level, pt = 2 << level;
    double total = 0.0;
    double hw = (w1 - w0) / pw, ht = (t1 - t0) / pt;
    // t-major so callers can cache per-t work across the inner w sweep
    for (int b = 0; b < pt; ++b)
      for (std::size_t j = 0; j < xs.size(); ++j) {
        double tq = t0 + b * ht + 0.5 * ht * (xs[j] + 1.0);
        for (int a = 0; a < pw; ++a)
          for (std::size_t i = 0; i < xs.size(); ++i) {
            double wq = w0 + a * hw + 0.5 * hw * (xs[i] + 1.0);
            total += 0.25 * hw * ht * ws[i] * ws[j] * f(wq, tq);
          }
      }
    if (level > 0 && std::abs(total - prev) < 1e-9 * std::max(1.0, std::abs(total)))
      return total;
    prev = total;
  }
  throw Error("quadrature failed to reach panel agreement");
}

template <class F>
double adaptive_quad_1d(const F& f, double t0, double t1) {
  std::vector<double> xs, ws;
  gauss_legendre(10, xs, ws);
  double prev = 0.0;
  for (int level = 0; level < 10; ++level) {
    int pt = 2 << level;
    double total = 0.0;
    double ht = (t1 - t0) / pt;
    for (int b = 0; b < pt; ++b) {
      double tl = t0 + b * ht;
      for (std::size_t j = 0; j < xs.size(); ++j)
        total += 0.5 * ht * ws[j] * f(tl + 0.5 * ht * (xs[j] + 1.0));
    }
    if (level > 0 && std::abs(total - prev) < 1e-10 * std::max(1.0, std::abs(total)))
      return total;
    prev = total;
  }
  throw Error("quadrature failed to reach panel agreement");
}

}  // namespace

namespace {

double density_from_jet(const AmbientMetric& ambient, const MapJet& mj, double s, int n) {
  if (mj.u[0] <= 0.0) throw DomainError("map exits the target chart (u0 <= 0)");
  Mat gx = ambient.gx_at(mj.u[0], mj.u.segment(1, n));
  Vec ys = mj.du_ds.segment(1, n), yt = mj.du_dt.segment(1, n);
  double grad2 = mj.du_ds[0] * mj.du_ds[0] + mj.du_dt[0] * mj.du_dt[0] + ys.dot(gx * ys) +
                 yt.dot(gx * yt);
  return 0.5 * s * s * grad2 / (mj.u[0] * mj.u[0]);
}

}  // namespace

double energy_density(const ExpansionMap& m, const AmbientMetric& ambient, double s,
                      double t) {
  if (m.domain_sign() != 1)
    throw ConfigError("energy density is defined for the hyperbolic-plane domain");
  MapJet mj = m.eval(s, t);
  return density_from_jet(ambient, mj, s, m.dim());
}

double truncated_energy(const ExpansionMap& m, const AmbientMetric& ambient,
                        const EnergyWindow& window, double eps) {
  if (m.domain_sign() != 1)
    throw ConfigError("energy is defined for the hyperbolic-plane domain");
  if (eps <= 0.0 || eps >= window.s_max) throw DomainError("cutoff must lie inside (0, s_max)");
  // substitute w = 1/s: ∫ e(u) s⁻² ds = ∫ e(u(1/w, t)) dw — a bounded integrand.
  // The per-t slice is cached across the inner w sweep.
  int n = m.dim();
  double cached_t = std::numeric_limits<double>::quiet_NaN();
  ExpansionMap::Slice sl;
  auto f = [&, n](double w, double t) {
    if (t != cached_t) {
      sl = m.slice_at(t);
      cached_t = t;
    }
    double s = 1.0 / w;
    return density_from_jet(ambient, m.eval_slice(sl, s), s, n);
  };
  return adaptive_quad_2d(f, 1.0 / window.s_max, 1.0 / eps, window.t0, window.t1);
}

EnergyReport renormalized_energy(const ExpansionMap& m, const AmbientMetric& ambient,
                                 const EnergyWindow& window,
                                 const std::vector<double>& eps_ladder) {
  if (eps_ladder.size() < 3) throw DomainError("cutoff ladder needs at least 3 entries");
  EnergyReport rep;
  rep.window = window;
  rep.epsilons = eps_ladder;
  for (double eps : eps_ladder) rep.energies.push_back(truncated_energy(m, ambient, window, eps));

  // least squares for E(ε) = c1/ε + e_ren + c·ε
  int k = static_cast<int>(eps_ladder.size());
  Mat A(k, 3);
  Vec b(k);
  for (int i = 0; i < k; ++i) {
    A(i, 0) = 1.0 / eps_ladder[i];
    A(i, 1) = 1.0;
    A(i, 2) = eps_ladder[i];
    b[i] = rep.energies[i];
  }
  Vec coef = A.colPivHouseholderQr().solve(b);
  rep.c1 = coef[0];
  rep.e_ren = coef[1];
  rep.fit_residual = (A * coef - b).cwiseAbs().maxCoeff();
  return rep;
}

VariationCheck first_variation_check(const ExprCurve& base,
                                     const std::shared_ptr<const ChartMetric>& chart,
                                     const AmbientMetric& ambient, const ExprCurve& u3,
                                     const ExprCurve& dphi, const EnergyWindow& window,
                                     double h) {
  auto perturbed = [&](double hh) {
    std::vector<Expr> comps;
    for (std::size_t i = 0; i < base.components().size(); ++i)
      comps.push_back(base.components()[i] + hh * dphi.components()[i]);
    CoefficientOverrides ov;
    ov.y3_field = std::make_shared<ExprCurve>(u3);
    auto curve = std::make_shared<ExprCurve>(std::move(comps));
    return ExpansionMap(curve, chart, 1, ov);
  };

  ExpansionMap base_map = perturbed(0.0);
  int n = chart->dim();

  // Outer-boundary flux counterterm. The classical variation formula is the
  // inner-boundary (s → 0) flux of the energy; on a window the slice
  // s = s_max carries the equal and opposite flux, which must be subtracted
  // before differencing or the two cancel identically:
  //   Ψ(m) = ∫ ⟨ s ∂_s u_m , u_m − u_base ⟩_{g₊} (dt/s) at s = s_max.
  auto outer_flux = [&](const ExpansionMap& m) {
    double s = window.s_max;
    auto f = [&](double t) {
      MapJet a = m.eval(s, t);
      MapJet b = base_map.eval(s, t);
      Mat gp = ambient.gplus_at(b.u[0], b.u.segment(1, n));
      Vec diff = a.u - b.u;
      return (s * a.du_ds).dot(gp * diff) / s;
    };
    return adaptive_quad_1d(f, window.t0, window.t1);
  };

  std::vector<double> ladder;
  for (double f : {0.2, 0.1, 0.05, 0.025}) ladder.push_back(f * window.s_max);

  ExpansionMap mp = perturbed(h), mm = perturbed(-h);
  double ep = renormalized_energy(mp, ambient, window, ladder).e_ren - outer_flux(mp);
  double em = renormalized_energy(mm, ambient, window, ladder).e_ren - outer_flux(mm);

  VariationCheck out;
  out.numeric = (ep - em) / (2.0 * h);

  auto integrand = [&](double t) {
    CurveJets j = base.jets(t);
    Mat g = metric_at(*chart, j.gamma).first;
    double lam2 = std::abs(j.d1.dot(g * j.d1));
    Vec u3v = u3.jets(t).gamma;
    Vec dphiv = dphi.jets(t).gamma;
    return -3.0 * u3v.dot(g * dphiv) / lam2;
  };
  out.predicted = adaptive_quad_1d(integrand, window.t0, window.t1);
  return out;
}

}  // namespace cgholo
