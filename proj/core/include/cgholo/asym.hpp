#pragma once

#include <utility>
#include <vector>

#include "cgholo/types.hpp"

namespace cgholo {

/// Result of a log-log slope fit over a dyadic sample ladder.
struct OrderFit {
  std::vector<std::pair<double, double>> samples;  // (s, value), s strictly decreasing
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double noise_floor = 0.0;
  int used_points = 0;
  /// Fewer than 3 samples rose above 10× the noise floor; callers treat this
  /// as a pass for claims of vanishing.
  bool all_at_noise_floor = false;
  /// Fit residuals are monotone across the ladder — the signature of a
  /// log-factor correction rather than a clean power law.
  bool log_correction = false;
};

/// Least-squares fit of log(value) against log(s), discarding samples whose
/// value is within 10× of the noise floor. Requires at least 5 samples on a
/// geometric ladder with positive values.
OrderFit estimate_order(const std::vector<std::pair<double, double>>& samples,
                        double noise_floor);

struct CoefficientExtraction {
  double value = 0.0;
  double error = 0.0;  // from the last two extrapolants
  bool converged = false;
};

/// Richardson extrapolation of value/s^order over a geometric ladder of
/// signed samples; recovers the s^order coefficient.
CoefficientExtraction extract_coefficient(
    const std::vector<std::pair<double, double>>& signed_samples, int order);

}  // namespace cgholo
