#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "cgholo/ode.hpp"
#include "cgholo/tensor.hpp"

namespace cgholo {

/// Coordinate derivatives of a curve at one parameter value.
struct CurveJets {
  Vec gamma;  // γ(t)
  Vec d1;     // γ̇
  Vec d2;     // γ̈
  Vec d3;     // γ⃛
};

/// Abstract parametrized curve in a chart.
class Curve {
public:
  virtual ~Curve() = default;
  virtual int dim() const = 0;
  virtual CurveJets jets(double t) const = 0;
};

/// Curve given by closed-form component expressions in the variable t.
class ExprCurve : public Curve {
public:
  explicit ExprCurve(std::vector<Expr> components);
  static ExprCurve from_strings(const std::vector<std::string>& components);

  int dim() const override { return static_cast<int>(comp_.size()); }
  CurveJets jets(double t) const override;
  const std::vector<Expr>& components() const { return comp_; }

  /// Precomposition with a univariate reparametrization t ↦ f(t).
  ExprCurve reparametrized(const Expr& f) const;

private:
  std::vector<Expr> comp_;
};

enum class Causal { Spacelike, Timelike, Null };

/// Causal character of the velocity with the scale-free null threshold
/// ||γ̇|²_g| < 1e-10 · max(1, |γ̇|²_euclid).
Causal causal_character(const ChartMetric& chart, const Vec& y, const Vec& v);

/// State of the first-order conformal geodesic system: position, velocity,
/// and the 1-form α (covector components).
struct CGState {
  double t = 0.0;
  Vec gamma;
  Vec v;
  Vec a;
};

/// Solves for α along a non-null curve:
/// α^♯ = (∇_γ̇γ̇ − 2⟨γ̇,∇_γ̇γ̇⟩γ̇/|γ̇|²)/|γ̇|², returned lowered.
/// Throws NullVelocityError naming the parameter value when |γ̇|² is null.
Vec alpha_from_curve(const ChartMetric& chart, const CurveJets& j, double t);

/// Packs (γ, v, a) into a 3n state vector and back.
Vec pack_cg_state(const CGState& s);
CGState unpack_cg_state(double t, const Vec& packed);

/// Time derivative of the packed (γ, v, a) state. Null velocities are fine:
/// no division by |v|² occurs.
Vec cg_rhs_first_order(const ChartMetric& chart, const CGState& s);

/// Residual of the reduced third-order equation at one curve point:
/// γ⃛_cov − 3⟨γ̇,γ̈_cov⟩γ̈_cov/|γ̇|² + (3|γ̈_cov|²/2|γ̇|²)γ̇ + 2P(γ̇,γ̇)γ̇ − |γ̇|²P(γ̇,·)^♯.
/// Zero exactly on conformal geodesics. Throws NullVelocityError on null γ̇.
Vec cg_residual_third_order(const ChartMetric& chart, const CurveJets& j, double t);

/// An integrated conformal geodesic with dense output.
class Trajectory {
public:
  /// Formulation behind the packed state: (γ, v, α) or (γ, γ̇, γ̈).
  enum class Form { FirstOrder, ThirdOrder };

  Trajectory(std::shared_ptr<const ChartMetric> chart, OdeSolution sol, int n,
             Form form = Form::FirstOrder);

  int dim() const { return n_; }
  double t_begin() const { return sol_.t_begin(); }
  double t_end() const { return sol_.t_end(); }
  CGState state_at(double t) const;
  /// Coordinate curve jets reconstructed analytically from the system
  /// right-hand side (no finite differences).
  CurveJets jets(double t) const;

private:
  std::shared_ptr<const ChartMetric> chart_;
  OdeSolution sol_;
  int n_;
  Form form_;
};

/// Integrates the (γ, α) system from s0 to t_final. Monitors the causal
/// character of v and aborts if it drifts across the ±1e-6 band.
Trajectory integrate_cg(const std::shared_ptr<const ChartMetric>& chart, const CGState& s0,
                        double t_final, double tol = 1e-10);

/// Same trajectory through the third-order formulation: state (γ, γ̇, γ̈),
/// with γ⃛ solved from the reduced equation. Non-null data only.
Trajectory integrate_cg_third_order(const std::shared_ptr<const ChartMetric>& chart,
                                    const CurveJets& init, double t0, double t_final,
                                    double tol = 1e-10);

/// Curve view of an integrated trajectory.
class TrajectoryCurve : public Curve {
public:
  explicit TrajectoryCurve(Trajectory traj) : traj_(std::move(traj)) {}
  int dim() const override { return traj_.dim(); }
  CurveJets jets(double t) const override { return traj_.jets(t); }
  const Trajectory& trajectory() const { return traj_; }

private:
  Trajectory traj_;
};

/// Real Möbius map t ↦ (at+b)/(ct+d), stored with |ad − bc| normalized to 1.
struct Mobius {
  double a = 1, b = 0, c = 0, d = 1;

  static Mobius make(double a, double b, double c, double d);
  double apply(double t) const;
  bool pole_in(double lo, double hi) const;
  /// Expression form (a*t+b)/(c*t+d) for curve reparametrization.
  Expr as_expr() const;
};

/// Numerical Schwarzian derivative S(f) = f'''/f' − (3/2)(f''/f')² by central
/// differences with step h.
double schwarzian_numeric(const Expr& f, double t, double h = 1e-3);

/// True when the numerical Schwarzian vanishes (< 1e-3, well below any genuine finite-difference
/// noise floor) at five sample points.
bool schwarzian_is_zero(const Mobius& f, double lo = 0.0, double hi = 1.0);

struct ReparamReport {
  double max_residual_input = 0.0;
  double max_residual_mapped = 0.0;
  bool pass = false;
};

/// Checks that a conformal geodesic stays one under t ↦ f(t): the input curve
/// must have third-order residual < input_tol on the samples, and the check
/// passes when the reparametrized curve stays < mapped_tol.
ReparamReport reparametrization_check(const ChartMetric& chart, const ExprCurve& curve,
                                      const Expr& f, const std::vector<double>& samples,
                                      double input_tol = 1e-8, double mapped_tol = 1e-6);

/// CSV export: columns t, gamma_i, v_i, a_i, residual_norm.
void write_trajectory_csv(std::ostream& out, const ChartMetric& chart, const Trajectory& traj,
                          const std::vector<double>& sample_times);

}  // namespace cgholo
