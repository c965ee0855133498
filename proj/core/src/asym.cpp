#include "cgholo/asym.hpp"

#include <cmath>

#include "cgholo/error.hpp"

namespace cgholo {

OrderFit estimate_order(const std::vector<std::pair<double, double>>& samples,
                        double noise_floor) {
  if (samples.size() < 5) throw DomainError("order estimation needs at least 5 samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].first >= samples[i - 1].first)
      throw DomainError("samples must be strictly decreasing in s");

  OrderFit fit;
  fit.samples = samples;
  fit.noise_floor = noise_floor;

  std::vector<double> xs, ys;
  for (const auto& [s, v] : samples) {
    if (v > 10.0 * noise_floor && v > 0.0) {
      xs.push_back(std::log(s));
      ys.push_back(std::log(v));
    }
  }
  fit.used_points = static_cast<int>(xs.size());
  if (fit.used_points < 3) {
    fit.all_at_noise_floor = true;
    return fit;
  }

  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss_res = 0, ss_tot = 0, ymean = sy / n;
  std::vector<double> resid(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double pred = fit.intercept + fit.slope * xs[i];
    resid[i] = ys[i] - pred;
    ss_res += resid[i] * resid[i];
    ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

  // Log-correction signature: a factor log(1/s) bends log v − slope·log s into
  // a concave residual profile that persists across the whole ladder, while a
  // clean power law with subleading contamination leaves convex residuals that
  // die out toward small s. Flag consistent concavity above the scatter level.
  if (xs.size() >= 5) {
    bool concave = true;
    double curvature = 0.0;
    for (std::size_t i = 1; i + 1 < resid.size(); ++i) {
      double d2 = resid[i + 1] - 2.0 * resid[i] + resid[i - 1];
      concave = concave && d2 < 1e-9;
      curvature = std::max(curvature, std::abs(d2));
    }
    fit.log_correction = concave && curvature > 1e-6;
  }
  return fit;
}

CoefficientExtraction extract_coefficient(
    const std::vector<std::pair<double, double>>& signed_samples, int order) {
  if (signed_samples.size() < 3)
    throw DomainError("coefficient extraction needs at least 3 samples");
  for (std::size_t i = 1; i < signed_samples.size(); ++i)
    if (signed_samples[i].first >= signed_samples[i - 1].first)
      throw DomainError("samples must be strictly decreasing in s");

  // ladder ratio (assumed geometric)
  double r = signed_samples[0].first / signed_samples[1].first;
  if (r <= 1.0) throw DomainError("samples must form a geometric ladder");

  std::size_t m = signed_samples.size();
  std::vector<double> a(m);
  for (std::size_t i = 0; i < m; ++i)
    a[i] = signed_samples[i].second / std::pow(signed_samples[i].first, order);

  // Neville-style Richardson tableau eliminating the s, s², ... correction
  // terms. Depth is capped: deep columns amplify sample noise faster than
  // they cancel corrections.
  const std::size_t jmax = std::min<std::size_t>(m - 1, 3);
  std::vector<std::vector<double>> T(m);
  for (std::size_t i = 0; i < m; ++i) {
    T[i].resize(std::min(i, jmax) + 1);
    T[i][0] = a[i];
    double rj = 1.0;
    for (std::size_t j = 1; j <= std::min(i, jmax); ++j) {
      rj *= r;
      T[i][j] = T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (rj - 1.0);
    }
  }

  CoefficientExtraction out;
  out.value = T[m - 1][jmax];
  double err_last = std::abs(T[m - 1][jmax] - T[m - 2][std::min(m - 2, jmax)]);
  double err_prev = std::abs(T[m - 2][std::min(m - 2, jmax)] - T[m - 3][std::min(m - 3, jmax)]);
  out.error = err_last;
  out.converged =
      err_last <= err_prev + 1e-12 || err_last < 1e-9 * std::max(1.0, std::abs(out.value));
  return out;
}

}  // namespace cgholo
