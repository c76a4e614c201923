#pragma once
#include <cstddef>
#include <vector>

namespace kdesorb {

// Closed-form equilibrium isotherms. Concentrations are dimensionless
// (particles per unit length over the whole domain), matching the simulator.

// Langmuir: C = B0 * K_eq * A / (1 + K_eq * A).
double langmuir(double conc_A, double k_eq, double b0);

// Freundlich: C = K * A^m.
double freundlich(double conc_A, double k, double m);

// The Freundlich coefficient implied by a heavy-tailed site distribution:
// K = m * pi * B0 * K_min^m / sin((1 - m) * pi).
double freundlich_coefficient(double m, double k_min, double b0);

// Full isotherm of the heterogeneous surface (site constants power-law
// distributed above K_min): the exact mixture of per-site Langmuir terms,
//   C(A) = B0 * m * y^m * I(y),  y = K_min * A,
//   I(y) = integral_y^inf x^(-m) / (1 + x) dx.
// Approaches freundlich() from below at small A and saturates to B0 at
// large A. Evaluated by quadrature to ~1e-8 relative accuracy; throws
// std::runtime_error if the quadrature fails to converge.
double combined_isotherm(double conc_A, double m, double k_min, double b0);

// Relative deviation of the combined isotherm from the pure Freundlich
// limit: (freundlich - combined) / freundlich, in (0, 1).
double relative_deviation(double conc_A, double m, double k_min);

// First-order (small K_min * A) expansion of relative_deviation:
// sin((1 - m) pi) / pi * (K_min * A)^(1 - m) / (1 - m). This is the series
// the deviation-level parameterization inverts.
double relative_deviation_series(double conc_A, double m, double k_min);

// Ordinary least squares on (log A, log C). Throws std::invalid_argument on
// fewer than two distinct abscissae or non-positive values.
struct LogLogFit {
  double slope = 0.0;      // fitted exponent
  double intercept = 0.0;  // natural-log intercept, i.e. log K
  double rms_residual = 0.0;
};
LogLogFit fit_loglog(const std::vector<double>& conc_A,
                     const std::vector<double>& conc_C);

// Least-squares K_eq of a Langmuir isotherm with the capacity b0 held fixed:
// minimizes sum_i (C_i - langmuir(A_i, K, b0))^2 over K. Coarse log-spaced
// scan followed by golden-section refinement; exact data is recovered to
// ~1e-10 relative. Throws std::invalid_argument on empty or mismatched input.
double fit_langmuir_keq(const std::vector<double>& conc_A,
                        const std::vector<double>& conc_C, double b0);

}  // namespace kdesorb
