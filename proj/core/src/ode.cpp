#include "cgholo/ode.hpp"

#include <algorithm>
#include <cmath>

#include "cgholo/error.hpp"

namespace cgholo {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b (5th order) minus b-hat (4th order): error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

Vec OdeSolution::at(double t) const {
  if (seg_t_.empty()) throw Error("empty solution");
  double lo = std::min(t0_, t1_), hi = std::max(t0_, t1_);
  if (t < lo - 1e-12 * (1 + std::abs(lo)) || t > hi + 1e-12 * (1 + std::abs(hi)))
    throw DomainError("dense-output query outside the integrated span");
  // binary search for the segment containing t (segments ordered by direction)
  bool fwd = t1_ >= t0_;
  std::size_t i =
      fwd ? static_cast<std::size_t>(
                std::upper_bound(seg_t_.begin(), seg_t_.end(), t) - seg_t_.begin())
          : static_cast<std::size_t>(
                std::upper_bound(seg_t_.begin(), seg_t_.end(), t, std::greater<double>()) -
                seg_t_.begin());
  if (i > 0) --i;
  double theta = (t - seg_t_[i]) / seg_h_[i];
  theta = std::clamp(theta, 0.0, 1.0);
  const auto& r = seg_c_[i];
  double th1 = 1.0 - theta;
  return r[0] + theta * (r[1] + th1 * (r[2] + theta * (r[3] + th1 * r[4])));
}

OdeSolution integrate_ode(const OdeRhs& f, double t0, double t1, const Vec& y0,
                          const OdeOptions& opt, const OdeMonitor& monitor) {
  OdeSolution sol;
  sol.t0_ = t0;
  sol.t1_ = t1;
  if (t0 == t1) {
    sol.y_end_ = y0;
    sol.seg_t_.push_back(t0);
    sol.seg_h_.push_back(1.0);
    sol.seg_c_.push_back({y0, Vec::Zero(y0.size()), Vec::Zero(y0.size()),
                          Vec::Zero(y0.size()), Vec::Zero(y0.size())});
    return sol;
  }
  double dir = t1 > t0 ? 1.0 : -1.0;
  double span = std::abs(t1 - t0);
  double hmax = opt.max_step > 0 ? opt.max_step : span;

  double t = t0;
  Vec y = y0;
  Vec k1 = f(t, y);

  double h;
  if (opt.initial_step > 0) {
    h = std::min(opt.initial_step, hmax);
  } else {
    double scale = std::max(1e-8, y.cwiseAbs().maxCoeff());
    double d = std::max(1e-8, k1.cwiseAbs().maxCoeff());
    h = std::min({0.01 * scale / d, 0.1 * span, hmax});
  }

  const double safety = 0.9, beta = 0.04, expo = 0.2 - 0.75 * beta;
  double err_old = 1e-4;
  const int max_steps = 2000000;

  for (int step = 0; step < max_steps; ++step) {
    if (dir * (t + dir * h - t1) > 0) h = std::abs(t1 - t);
    double hs = dir * h;
    if (std::abs(hs) < 1e-14 * std::max(1.0, std::abs(t)))
      throw Error("step-size underflow at t = " + std::to_string(t));

    Vec k2 = f(t + c2 * hs, y + hs * (a21 * k1));
    Vec k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    Vec k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    Vec k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Vec k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Vec k7 = f(t + hs, ynew);

    Vec errv = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double q = errv[i] / sc;
      err += q * q;
    }
    err = std::sqrt(err / static_cast<double>(y.size()));

    if (err <= 1.0) {
      // accept; build the quartic dense-output segment
      Vec dy = ynew - y;
      std::array<Vec, 5> r;
      r[0] = y;
      r[1] = dy;
      r[2] = hs * k1 - dy;
      r[3] = dy - hs * k7 - r[2];
      r[4] = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      sol.seg_t_.push_back(t);
      sol.seg_h_.push_back(hs);
      sol.seg_c_.push_back(std::move(r));

      t += hs;
      y = std::move(ynew);
      k1 = std::move(k7);
      if (monitor) monitor(t, y);

      double fac = safety * std::pow(err + 1e-20, -expo) * std::pow(err_old, beta);
      fac = std::clamp(fac, 0.2, 5.0);
      h = std::min(h * fac, hmax);
      err_old = std::max(err, 1e-4);

      if (dir * (t - t1) >= 0 || std::abs(t - t1) < 1e-14 * std::max(1.0, std::abs(t1))) {
        sol.y_end_ = y;
        return sol;
      }
    } else {
      double fac = std::max(0.2, safety * std::pow(err, -0.2));
      h *= fac;
    }
  }
  throw Error("integrator exceeded the step budget");
}

}  // namespace cgholo
