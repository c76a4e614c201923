#pragma once
#include <span>

#include "kdesorb/config.hpp"

namespace kdesorb {

// Rule-of-thumb kernel bandwidth: prefactor * sigma_hat * N^(-1/5), with
// sigma_hat the sample standard deviation of the positions. Throws
// std::invalid_argument (advising the fixed variant) when fewer than two
// positions are given or the spread is zero, since the rule degenerates.
// The fixed variant just returns cfg.fixed_h.
double bandwidth(std::span<const double> positions, const BandwidthConfig& cfg);

// Same statistic without the guard rails: returns 0 where bandwidth() would
// throw. Block-deterministic accumulation, so the value is identical for any
// thread count. Used by the engine, which falls back to the previous step's
// bandwidth on degeneracy.
double bandwidth_or_zero(std::span<const double> positions,
                         const BandwidthConfig& cfg);

struct KernelParams {
  double h = 0.0;    // bandwidth
  double k_f = 0.0;  // forward rate constant of the pair
  double m_p = 0.0;  // particle mass
  double dt = 0.0;
};

// Peak pair-reaction probability k_f * m_p * dt / (2 h sqrt(pi)), before the
// Gaussian falloff and the clamp. Shared between p_forward and the engine's
// envelope walk.
double p_peak(const KernelParams& p);

// Forward reaction probability for a pair at separation r:
// min(1, p_peak * exp(-r^2 / (2h)^2)). If out_clamped is given it is set
// when the clamp engaged.
double p_forward(double r, const KernelParams& p, bool* out_clamped = nullptr);

}  // namespace kdesorb
