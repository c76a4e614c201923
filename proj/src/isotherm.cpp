#include "kdesorb/isotherm.hpp"

#include <cmath>
#include <stdexcept>

#include "kdesorb/quadrature.hpp"

namespace kdesorb {

namespace {

void check_exponent(double m) {
  if (!(m > 0 && m < 1))
    throw std::invalid_argument("isotherm: m must lie strictly between 0 and 1");
}

void check_conc(double a) {
  if (!(a >= 0) || !std::isfinite(a))
    throw std::invalid_argument(
        "isotherm: concentration must be non-negative and finite");
}

// integral_y^inf x^(-m) / (1 + x) dx. Split at x = 1 and substitute each
// piece onto the power of x that absorbs its endpoint behaviour: u = x^(1-m)
// on [y, 1] and v = x^(-m) on [1, inf) both reduce to integrals of
// 1 / (1 + u^s) with values in [1/2, 1], so adaptive quadrature converges
// for any y down to zero.
double tail_integral(double y, double m) {
  const double p = 1.0 - m;
  auto near_f = [=](double u) { return 1.0 / (1.0 + std::pow(u, 1.0 / p)); };
  auto far_f = [=](double v) { return 1.0 / (1.0 + std::pow(v, 1.0 / m)); };
  if (y >= 1.0) return integrate(far_f, 0.0, std::pow(y, -m), 1e-10) / m;
  return integrate(near_f, std::pow(y, p), 1.0, 1e-10) / p +
         integrate(far_f, 0.0, 1.0, 1e-10) / m;
}

// integral_0^y x^(-m) / (1 + x) dx through u = x^(1-m): the substitution
// absorbs the integrable singularity at zero, leaving
// 1/(1-m) * integral_0^{y^(1-m)} du / (1 + u^(1/(1-m))), bounded and smooth.
double head_integral(double y, double m) {
  const double p = 1.0 - m;
  const double up = std::pow(y, p);
  const double inv_p = 1.0 / p;
  auto f = [=](double u) { return 1.0 / (1.0 + std::pow(u, inv_p)); };
  return integrate(f, 0.0, up, 1e-10) / p;
}

}  // namespace

double langmuir(double conc_A, double k_eq, double b0) {
  check_conc(conc_A);
  const double x = k_eq * conc_A;
  return b0 * x / (1.0 + x);
}

double freundlich(double conc_A, double k, double m) {
  check_conc(conc_A);
  return k * std::pow(conc_A, m);
}

double freundlich_coefficient(double m, double k_min, double b0) {
  check_exponent(m);
  return m * M_PI * b0 * std::pow(k_min, m) / std::sin((1.0 - m) * M_PI);
}

double combined_isotherm(double conc_A, double m, double k_min, double b0) {
  check_exponent(m);
  check_conc(conc_A);
  if (conc_A == 0) return 0.0;
  const double y = k_min * conc_A;
  return b0 * m * std::pow(y, m) * tail_integral(y, m);
}

double relative_deviation(double conc_A, double m, double k_min) {
  check_exponent(m);
  check_conc(conc_A);
  if (conc_A == 0) return 0.0;
  const double y = k_min * conc_A;
  return std::sin((1.0 - m) * M_PI) / M_PI * head_integral(y, m);
}

double relative_deviation_series(double conc_A, double m, double k_min) {
  check_exponent(m);
  check_conc(conc_A);
  const double y = k_min * conc_A;
  const double p = 1.0 - m;
  return std::sin(p * M_PI) / M_PI * std::pow(y, p) / p;
}

double fit_langmuir_keq(const std::vector<double>& conc_A,
                        const std::vector<double>& conc_C, double b0) {
  if (conc_A.empty() || conc_A.size() != conc_C.size())
    throw std::invalid_argument("fit_langmuir_keq: bad input lengths");
  auto sse = [&](double log_k) {
    const double k = std::exp(log_k);
    double s = 0;
    for (std::size_t i = 0; i < conc_A.size(); ++i) {
      const double r = conc_C[i] - langmuir(conc_A[i], k, b0);
      s += r * r;
    }
    return s;
  };
  // Bracket the minimum with a dense scan over 18 decades of K, then narrow
  // by golden section. The scan sidesteps any flat-tail plateaus.
  const double lo = std::log(1e-9), hi = std::log(1e9);
  const int n_scan = 600;
  double best = lo, best_v = sse(lo);
  for (int i = 1; i <= n_scan; ++i) {
    const double x = lo + (hi - lo) * i / n_scan;
    const double v = sse(x);
    if (v < best_v) {
      best_v = v;
      best = x;
    }
  }
  const double span = (hi - lo) / n_scan;
  double a = best - span, b = best + span;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = sse(x1), f2 = sse(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = sse(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = sse(x2);
    }
  }
  return std::exp(0.5 * (a + b));
}

LogLogFit fit_loglog(const std::vector<double>& conc_A,
                     const std::vector<double>& conc_C) {
  if (conc_A.size() != conc_C.size())
    throw std::invalid_argument("fit_loglog: length mismatch");
  const std::size_t n = conc_A.size();
  if (n < 2) throw std::invalid_argument("fit_loglog: need at least two points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(conc_A[i] > 0) || !(conc_C[i] > 0))
      throw std::invalid_argument("fit_loglog: values must be positive");
    lx[i] = std::log(conc_A[i]);
    ly[i] = std::log(conc_C[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0)
    throw std::invalid_argument("fit_loglog: need at least two distinct abscissae");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

}  // namespace kdesorb
