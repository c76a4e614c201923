#include "kdesorb/kde.hpp"

#include <cmath>
#include <stdexcept>

namespace kdesorb {

namespace {

// Sample standard deviation, or 0 when it degenerates (n < 2 or no spread).
double sample_std(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace

double bandwidth(std::span<const double> positions, const BandwidthConfig& cfg) {
  if (cfg.variant == BandwidthVariant::fixed) return cfg.fixed_h;
  if (positions.size() < 2)
    throw std::invalid_argument(
        "bandwidth: need at least two positions for the rule of thumb; "
        "use the fixed bandwidth variant");
  const double sigma = sample_std(positions);
  if (sigma == 0.0)
    throw std::invalid_argument(
        "bandwidth: positions have zero spread; use the fixed bandwidth "
        "variant");
  return cfg.prefactor * sigma *
         std::pow(static_cast<double>(positions.size()), -0.2);
}

double bandwidth_or_zero(std::span<const double> positions,
                         const BandwidthConfig& cfg) {
  if (cfg.variant == BandwidthVariant::fixed) return cfg.fixed_h;
  if (positions.size() < 2) return 0.0;
  const double sigma = sample_std(positions);
  if (sigma == 0.0) return 0.0;
  return cfg.prefactor * sigma *
         std::pow(static_cast<double>(positions.size()), -0.2);
}

double p_peak(const KernelParams& p) {
  if (!(p.h > 0))
    throw std::invalid_argument("p_forward: bandwidth must be positive");
  return p.k_f * p.m_p * p.dt / (2.0 * p.h * std::sqrt(M_PI));
}

double p_forward(double r, const KernelParams& p, bool* out_clamped) {
  const double q = 2.0 * p.h;
  const double raw = p_peak(p) * std::exp(-(r * r) / (q * q));
  const bool clamped = raw > 1.0;
  if (out_clamped) *out_clamped = clamped;
  return clamped ? 1.0 : raw;
}

}  // namespace kdesorb
