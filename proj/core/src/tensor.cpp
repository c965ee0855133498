#include "cgholo/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "cgholo/error.hpp"

namespace cgholo {

namespace {

std::vector<std::string> chart_vars(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("y" + std::to_string(i));
  return v;
}

int tri_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // row-major upper triangle offset
  return i * n - i * (i - 1) / 2 + (j - i);
}

}  // namespace

ChartMetric::ChartMetric(int n, std::vector<Expr> upper, Signature sig)
    : n_(n), sig_(sig), vars_(chart_vars(n)), comp_(std::move(upper)) {
  if (n_ < 2) throw ConfigError("chart dimension must be at least 2");
  if (static_cast<int>(comp_.size()) != n_ * (n_ + 1) / 2)
    throw ConfigError("metric component count does not match dimension");
  if (sig_.p + sig_.q != n_) throw ConfigError("signature does not sum to dimension");
}

ChartMetric ChartMetric::from_strings(int n, const std::vector<std::string>& upper,
                                      Signature sig) {
  std::vector<Expr> comp;
  auto vars = chart_vars(n);
  comp.reserve(upper.size());
  for (const auto& s : upper) comp.push_back(Expr::parse(s, vars));
  return ChartMetric(n, std::move(comp), sig);
}

ChartMetric ChartMetric::euclidean(int n) {
  std::vector<Expr> comp;
  auto vars = chart_vars(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) comp.push_back(Expr::number(i == j ? 1.0 : 0.0, vars));
  return ChartMetric(n, std::move(comp), Signature{n, 0});
}

ChartMetric ChartMetric::minkowski(int n) {
  std::vector<Expr> comp;
  auto vars = chart_vars(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      comp.push_back(Expr::number(i != j ? 0.0 : (i == 0 ? -1.0 : 1.0), vars));
  return ChartMetric(n, std::move(comp), Signature{n - 1, 1});
}

ChartMetric ChartMetric::hyperbolic_half_plane() {
  return from_strings(2, {"1/y1^2", "0", "1/y1^2"}, Signature{2, 0});
}

ChartMetric ChartMetric::round_sphere_polar(int n) {
  if (n == 2) return from_strings(2, {"1", "0", "sin(y1)^2"}, Signature{2, 0});
  if (n == 3)
    return from_strings(3, {"1", "0", "0", "sin(y1)^2", "0", "sin(y1)^2*sin(y2)^2"},
                        Signature{3, 0});
  throw ConfigError("round sphere chart available for n = 2, 3 only");
}

const Expr& ChartMetric::component(int i, int j) const { return comp_[tri_index(n_, i, j)]; }

const Expr& ChartMetric::schouten_component(int i, int j) const {
  return schouten_[tri_index(n_, i, j)];
}

namespace {

struct MetricJets {
  Mat g, g_inv;
  Tensor3 dg;   // dg(i,j,k) = ∂_k g_ij
  Tensor4 ddg;  // ddg(i,j,k,l) = ∂_k ∂_l g_ij
};

MetricJets metric_jets(const ChartMetric& m, const Vec& y) {
  int n = m.dim();
  MetricJets r;
  r.g = Mat::Zero(n, n);
  r.dg = Tensor3(n);
  r.ddg = Tensor4(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet2 jet = m.component(i, j).eval_jet2(y);
      r.g(i, j) = r.g(j, i) = jet.value;
      for (int k = 0; k < n; ++k) {
        r.dg(i, j, k) = r.dg(j, i, k) = jet.grad[k];
        for (int l = 0; l < n; ++l) r.ddg(i, j, k, l) = r.ddg(j, i, k, l) = jet.hess(k, l);
      }
    }

  Eigen::JacobiSVD<Mat> svd(r.g);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > 1e12) throw SingularMetricError("metric singular at evaluation point");

  Eigen::SelfAdjointEigenSolver<Mat> es(r.g);
  int pos = 0, neg = 0;
  for (int k = 0; k < n; ++k) (es.eigenvalues()[k] > 0.0 ? pos : neg)++;
  Signature sig = m.signature();
  if (pos != sig.p || neg != sig.q)
    throw SingularMetricError("metric eigenvalue signs disagree with declared signature");

  r.g_inv = Eigen::PartialPivLU<Mat>(r.g).solve(Mat::Identity(n, n));
  return r;
}

Tensor3 christoffel_from(const MetricJets& mj) {
  int n = static_cast<int>(mj.g.rows());
  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += mj.g_inv(i, l) * (mj.dg(l, k, j) + mj.dg(l, j, k) - mj.dg(j, k, l));
        gamma(i, j, k) = gamma(i, k, j) = 0.5 * acc;
      }
  return gamma;
}

}  // namespace

std::pair<Mat, Mat> metric_at(const ChartMetric& m, const Vec& y) {
  MetricJets mj = metric_jets(m, y);
  return {mj.g, mj.g_inv};
}

Tensor3 christoffel(const ChartMetric& m, const Vec& y) {
  return christoffel_from(metric_jets(m, y));
}

CurvaturePoint curvature_at(const ChartMetric& m, const Vec& y) {
  int n = m.dim();
  MetricJets mj = metric_jets(m, y);

  CurvaturePoint cp;
  cp.y = y;
  cp.g = mj.g;
  cp.g_inv = mj.g_inv;
  cp.gamma = christoffel_from(mj);

  // ∂_m g^il = −g^ia (∂_m g_ab) g^bl
  Tensor3 dginv(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int mm = 0; mm < n; ++mm) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) acc -= mj.g_inv(i, a) * mj.dg(a, b, mm) * mj.g_inv(b, l);
        dginv(i, l, mm) = acc;
      }

  cp.dgamma = Tensor4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k)
        for (int mm = 0; mm < n; ++mm) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) {
            acc += 0.5 * dginv(i, l, mm) * (mj.dg(l, k, j) + mj.dg(l, j, k) - mj.dg(j, k, l));
            acc += 0.5 * mj.g_inv(i, l) *
                   (mj.ddg(l, k, j, mm) + mj.ddg(l, j, k, mm) - mj.ddg(j, k, l, mm));
          }
          cp.dgamma(i, j, k, mm) = cp.dgamma(i, k, j, mm) = acc;
        }

  cp.riemann = Tensor4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = cp.dgamma(i, l, j, k) - cp.dgamma(i, k, j, l);
          for (int a = 0; a < n; ++a)
            acc += cp.gamma(i, k, a) * cp.gamma(a, l, j) - cp.gamma(i, l, a) * cp.gamma(a, k, j);
          cp.riemann(i, j, k, l) = acc;
        }

  cp.ricci = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += cp.riemann(k, j, k, l);
      cp.ricci(j, l) = acc;
    }
  // enforce exact symmetry against roundoff
  cp.ricci = 0.5 * (cp.ricci + cp.ricci.transpose()).eval();

  cp.scalar = (mj.g_inv * cp.ricci).trace();

  if (n >= 3) {
    cp.schouten = (cp.ricci - cp.scalar / (2.0 * (n - 1)) * mj.g) / (n - 2);
  } else if (m.has_schouten_override()) {
    cp.schouten = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        cp.schouten(i, j) = cp.schouten(j, i) = m.schouten_component(i, j).eval(y);
  } else {
    throw DomainError(
        "Schouten tensor undefined at dimension 2 without an override; "
        "supply one via schouten_override");
  }
  return cp;
}

ChartMetric schouten_override(const ChartMetric& m, const std::vector<Expr>& upperP,
                              const std::vector<Vec>& sample_points) {
  int n = m.dim();
  if (n != 2) throw ConfigError("Schouten override applies to dimension 2 only");
  if (static_cast<int>(upperP.size()) != n * (n + 1) / 2)
    throw ConfigError("Schouten override component count does not match dimension");

  ChartMetric out = m;
  out.schouten_ = upperP;

  auto P_at = [&](const Vec& y) {
    Mat P(2, 2);
    P(0, 0) = upperP[0].eval(y);
    P(0, 1) = P(1, 0) = upperP[1].eval(y);
    P(1, 1) = upperP[2].eval(y);
    return P;
  };

  for (const Vec& y : sample_points) {
    CurvaturePoint cp = curvature_at(out, y);
    Mat P = P_at(y);
    double trP = (cp.g_inv * P).trace();
    double want = cp.scalar / 2.0;
    double scale = std::max({1.0, std::abs(trP), std::abs(want)});
    if (std::abs(trP - want) > 1e-8 * scale)
      throw DomainError("Schouten override violates the trace identity tr P = R/2");

    // Divergence identity ∇^j P_ij = ∇_i tr P by central differences.
    const double h = 1e-5;
    Tensor3 dP(2);  // dP(i,j,k) = ∂_k P_ij
    Vec dtr(2);
    for (int k = 0; k < 2; ++k) {
      Vec yp = y, ym = y;
      yp[k] += h;
      ym[k] -= h;
      Mat Pp = P_at(yp), Pm = P_at(ym);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) dP(i, j, k) = (Pp(i, j) - Pm(i, j)) / (2.0 * h);
      auto gp = metric_at(out, yp);
      auto gm = metric_at(out, ym);
      dtr[k] = ((gp.second * Pp).trace() - (gm.second * Pm).trace()) / (2.0 * h);
    }
    for (int i = 0; i < 2; ++i) {
      double div = 0.0;
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double covd = dP(i, j, k);
          for (int l = 0; l < 2; ++l)
            covd -= cp.gamma(l, k, i) * P(l, j) + cp.gamma(l, k, j) * P(i, l);
          div += cp.g_inv(j, k) * covd;
        }
      if (std::abs(div - dtr[i]) > 1e-4 * std::max(1.0, std::abs(dtr[i])))
        throw DomainError("Schouten override violates the divergence identity");
    }
  }
  return out;
}

}  // namespace cgholo
