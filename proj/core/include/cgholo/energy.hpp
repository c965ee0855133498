#pragma once

#include "cgholo/hmap.hpp"

namespace cgholo {

/// Integration window on the domain: t ∈ [t0, t1], s ∈ (0, s_max].
struct EnergyWindow {
  double t0 = 0.0;
  double t1 = 1.0;
  double s_max = 1.0;
};

struct EnergyReport {
  EnergyWindow window;
  std::vector<double> epsilons;
  std::vector<double> energies;  // E(ε) per ladder entry
  double c1 = 0.0;               // 1/ε coefficient
  double e_ren = 0.0;            // constant term
  double fit_residual = 0.0;     // max |model − E| over the ladder
};

/// Energy density e(u) = ½ s²[(∂_su⁰)² + (∂_tu⁰)² + (g_{u⁰})_ij(∂_su^i∂_su^j
/// + ∂_tu^i∂_tu^j)]/(u⁰)². Hyperbolic-plane domain only (domain_sign = +1).
double energy_density(const ExpansionMap& m, const AmbientMetric& ambient, double s, double t);

/// E(ε) = ∫∫ e(u) s⁻² ds dt over the window with s ≥ ε, by adaptive
/// Gauss–Legendre quadrature (panel doubling to 1e-9 agreement).
double truncated_energy(const ExpansionMap& m, const AmbientMetric& ambient,
                        const EnergyWindow& window, double eps);

/// Fits E(ε) = c1/ε + e_ren + c·ε over the ladder.
EnergyReport renormalized_energy(const ExpansionMap& m, const AmbientMetric& ambient,
                                 const EnergyWindow& window,
                                 const std::vector<double>& eps_ladder);

struct VariationCheck {
  double numeric = 0.0;
  double predicted = 0.0;
};

/// Criticality probe: the boundary curve is perturbed by ±h·δφ(t) and each
/// perturbed map carries the same third-order coefficient field u3 in place
/// of y3. The windowed energy gains an outer-boundary flux at s = s_max that
/// exactly cancels the inner-boundary term of the classical variation
/// formula, so that flux is subtracted as a counterterm before the central
/// difference. The result is compared against the predicted first variation
/// −3 ∫ ⟨u3, δφ⟩_g / λ² dt.
VariationCheck first_variation_check(const ExprCurve& base,
                                     const std::shared_ptr<const ChartMetric>& chart,
                                     const AmbientMetric& ambient, const ExprCurve& u3,
                                     const ExprCurve& dphi, const EnergyWindow& window,
                                     double h = 1e-4);

}  // namespace cgholo
