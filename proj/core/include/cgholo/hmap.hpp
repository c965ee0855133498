#pragma once

#include <memory>
#include <optional>

#include "cgholo/ambient.hpp"
#include "cgholo/geodesic.hpp"

namespace cgholo {

/// Value and first/second partials of the map u at a point (s, t).
/// Index 0 is the target x-coordinate; 1..n the boundary coordinates.
struct MapJet {
  Vec u, du_ds, du_dt, d2_ss, d2_tt, d2_st;
};

/// Additive adjustments to the canonical expansion coefficients, used to
/// probe how each term controls the vanishing orders.
struct CoefficientOverrides {
  double x1_shift = 0.0;
  double x2 = 0.0;
  double x3_shift = 0.0;
  double v0 = 0.0;                // s³ log s coefficient of u⁰
  std::optional<Vec> y2_shift;
  std::optional<Vec> y3;
  std::optional<Vec> v;           // s³ log s coefficient of the y-components
  /// t-dependent y3 (evaluated pointwise); takes precedence over y3.
  std::shared_ptr<const Curve> y3_field;
};

/// Truncated polyhomogeneous map
///   u⁰(s,t) = s·x1 + s²·x2 + s³·x3 + s³ log s·v0,
///   uⁱ(s,t) = γⁱ + s²·y2ⁱ + s³·y3ⁱ + s³ log s·vⁱ,
/// with the canonical coefficients x1 = λ, x2 = 0, y2 = ½λ²α^♯,
/// x3 = −¼λ³|α|², y3 = 0 built from the boundary curve. domain_sign is +1
/// for a hyperbolic-plane domain and −1 for its Lorentzian counterpart.
class ExpansionMap {
public:
  ExpansionMap(std::shared_ptr<const Curve> curve, std::shared_ptr<const ChartMetric> chart,
               int domain_sign, CoefficientOverrides overrides = {});

  int dim() const { return chart_->dim(); }
  int domain_sign() const { return sign_; }
  const Curve& curve() const { return *curve_; }
  const ChartMetric& chart() const { return *chart_; }
  const CoefficientOverrides& overrides() const { return ov_; }

  struct Coefficients {
    CurveJets jets;
    double lambda = 0.0;
    Vec alpha;        // covector
    Vec alpha_sharp;  // raised
    double alpha_sq = 0.0;
    double x1 = 0.0, x2 = 0.0, x3 = 0.0, v0 = 0.0;
    Vec y2, y3, v;
  };
  /// Coefficient functions at parameter t. Checks that the causal character
  /// of γ̇ matches domain_sign.
  Coefficients coefficients_at(double t) const;

  /// All t-dependent data needed to evaluate the map at one t: coefficient
  /// values plus their first and second t-derivatives (5-point central
  /// differences with step 1e-4·max(1,|t|); γ-derivatives exact).
  struct Slice {
    Coefficients c;
    double x1p = 0, x2p = 0, x3p = 0, v0p = 0;
    double x1pp = 0, x2pp = 0, x3pp = 0, v0pp = 0;
    Vec y2p, y3p, vp, y2pp, y3pp, vpp;
  };
  Slice slice_at(double t) const;

  /// Map jet at s > 0 from a precomputed slice (s-derivatives analytic).
  MapJet eval_slice(const Slice& sl, double s) const;

  /// Map jet at (s, t), s > 0.
  MapJet eval(double s, double t) const { return eval_slice(slice_at(t), s); }

private:
  std::shared_ptr<const Curve> curve_;
  std::shared_ptr<const ChartMetric> chart_;
  int sign_;
  CoefficientOverrides ov_;
};

/// Tension field τ(u)^I = s²[∂_s²u^I ± ∂_t²u^I + Γ^I_JK(u)(∂_su^J∂_su^K ±
/// ∂_tu^J∂_tu^K)] with exact ambient Christoffels; the sign is domain_sign.
Vec tension(const ExpansionMap& m, const AmbientMetric& ambient, double s, double t);

struct SffComponents {
  Vec ss, tt, st;  // ∇_sΦ_s^I, ∇_tΦ_t^I, ∇_sΦ_t^I
};

/// Second fundamental form ∇_AΦ_B^I with the domain Christoffels
/// Γ^s_ss = −1/s, Γ^s_tt = ±1/s, Γ^t_st = −1/s and exact ambient Christoffels.
SffComponents second_fundamental_form(const ExpansionMap& m, const AmbientMetric& ambient,
                                      double s, double t);

/// The predicted coefficients of s in each independent component of ∇du for
/// general x3, y3 (with the canonical x1, x2, y2):
///   ∇_sΦ_s⁰: 4x3 + λ³|α|²        ∇_tΦ_t⁰: ∓(4x3 + λ³|α|²)
///   ∇_sΦ_t⁰: 3λ⁻¹⟨γ̇,y3⟩        ∇_sΦ_s^i: 3y3^i     ∇_tΦ_t^i: ∓3y3^i
///   ∇_sΦ_t^i: −2λ⁻¹x3γ̇^i + λ²(∇_γ̇α)^i − λ²α(γ̇)α^i − λ²P^i_kγ̇^k
struct SffLeading {
  double ss0 = 0.0, tt0 = 0.0, st0 = 0.0;
  Vec ssi, tti, sti;
};
SffLeading sff_leading_coefficients(const ChartMetric& chart, const Curve& curve, double t,
                                    int domain_sign, double x3, const Vec& y3);

struct PullbackComponents {
  double ss = 0.0, st = 0.0, tt = 0.0;
};

/// Coordinate components of u*g₊ − h₊ where h₊ has components
/// (1/s², 0, ±1/s²).
PullbackComponents pullback(const ExpansionMap& m, const AmbientMetric& ambient, double s,
                            double t);

/// The limiting dt²-component of u*g₊ − h₊ predicted from the boundary data:
/// (1/λ²)[(∂_tλ)² ∓ 2λx3 + 2λ(∂_tλ)α(γ̇) + λ²(∇_γ̇α)(γ̇) − λ²P(γ̇,γ̇)].
double pullback_tt_limit(const ChartMetric& chart, const Curve& curve, double t,
                         int domain_sign, double x3);

}  // namespace cgholo
