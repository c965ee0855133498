#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cgholo/types.hpp"

namespace cgholo {

/// Right-hand side y' = f(t, y).
using OdeRhs = std::function<Vec(double, const Vec&)>;

/// Called after every accepted step; may throw to abort the integration.
using OdeMonitor = std::function<void(double, const Vec&)>;

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 0.0;  // 0 = automatic
  double max_step = 0.0;      // 0 = span length
};

/// Integration result with a piecewise-quartic dense interpolant.
class OdeSolution {
public:
  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  const Vec& final_state() const { return y_end_; }
  std::size_t steps() const { return seg_t_.size(); }

  /// Dense-output evaluation anywhere inside [t_begin, t_end].
  Vec at(double t) const;

private:
  friend OdeSolution integrate_ode(const OdeRhs&, double, double, const Vec&,
                                   const OdeOptions&, const OdeMonitor&);
  double t0_ = 0.0, t1_ = 0.0;
  Vec y_end_;
  // per accepted step: left endpoint, width, and the five interpolation vectors
  std::vector<double> seg_t_, seg_h_;
  std::vector<std::array<Vec, 5>> seg_c_;
};

/// Adaptive embedded Runge–Kutta 5(4) (Dormand–Prince) with PI step-size
/// control. Supports decreasing spans (t1 < t0). Throws Error on step-size
/// underflow, reporting the last good t.
OdeSolution integrate_ode(const OdeRhs& f, double t0, double t1, const Vec& y0,
                          const OdeOptions& opt = {}, const OdeMonitor& monitor = {});

}  // namespace cgholo
