#include "pam/specfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pam/quadrature.hpp"
#include "pam/rng.hpp"

namespace pam {

double heat_kernel(double t, std::span<const double> x) {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be positive");
  const int d = static_cast<int>(x.size());
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  return std::pow(2.0 * M_PI * t, -0.5 * d) * std::exp(-r2 / (2.0 * t));
}

double heat_kernel1(double t, double x) {
  return heat_kernel(t, std::span<const double>(&x, 1));
}

double SimplexParams::alpha_sum() const {
  double s = 0.0;
  for (double a : alphas) s += a;
  return s;
}

void SimplexParams::validate() const {
  if (!(t > 0.0)) throw std::domain_error("SimplexParams: t must be positive");
  if (alphas.empty()) throw std::domain_error("SimplexParams: need at least one exponent");
  for (double a : alphas)
    if (!(a > -1.0 && a < 1.0))
      throw std::domain_error("SimplexParams: exponents must lie in (-1, 1)");
  if (!(alpha_sum() + order() > 0.0))
    throw std::domain_error("SimplexParams: |alpha| + m must be positive");
}

double simplex_integral_exact(const SimplexParams& p) {
  p.validate();
  const double m = p.order();
  double log_num = 0.0;
  for (double a : p.alphas) log_num += std::lgamma(a + 1.0);
  const double expo = p.alpha_sum() + m;
  return std::exp(expo * std::log(p.t) + log_num - std::lgamma(expo + 1.0));
}

McEstimate simplex_integral_mc(const SimplexParams& p, std::size_t samples,
                               std::uint64_t seed) {
  p.validate();
  if (samples < 1000) throw std::invalid_argument("simplex_integral_mc: samples must be >= 1e3");
  const int m = p.order();
  Rng rng(seed);
  std::vector<double> r(m);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    for (int i = 0; i < m; ++i) r[i] = rng.uniform(0.0, p.t);
    std::sort(r.begin(), r.end());
    double f = 1.0, prev = 0.0;
    for (int i = 0; i < m; ++i) {
      f *= std::pow(r[i] - prev, p.alphas[i]);
      prev = r[i];
    }
    sum += f;
    sum2 += f * f;
  }
  // Simplex volume t^m / m!
  double vol = 1.0;
  for (int i = 1; i <= m; ++i) vol *= p.t / i;
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum2 / n - mean * mean) * n / (n - 1.0));
  return {vol * mean, vol * std::sqrt(var / n)};
}

double simplex_integral_bound(const SimplexParams& p, double c) {
  p.validate();
  const double m = p.order();
  const double expo = p.alpha_sum() + m;
  return std::pow(c, m) * std::exp(expo * std::log(p.t) - std::lgamma(expo + 1.0));
}

double mittag_leffler_sum(double a, double z, double tol) {
  if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("mittag_leffler_sum: a must be in (0,1]");
  if (z < 0.0) throw std::domain_error("mittag_leffler_sum: z must be >= 0");
  if (!(tol > 0.0)) throw std::domain_error("mittag_leffler_sum: tol must be positive");
  double sum = 1.0;  // n = 0 term
  double term = 1.0;
  int below = 0;
  for (int n = 1; n < 1000000; ++n) {
    term *= z / std::pow(static_cast<double>(n), a);
    sum += term;
    if (!std::isfinite(sum)) return sum;
    below = term < tol ? below + 1 : 0;
    if (below >= 3) break;
  }
  return sum;
}

double mittag_leffler_log_sum(double a, double z) {
  if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("mittag_leffler_log_sum: a must be in (0,1]");
  if (z < 0.0) throw std::domain_error("mittag_leffler_log_sum: z must be >= 0");
  if (z == 0.0) return 0.0;
  // log t_n = n log z - a lgamma(n+1) peaks near n* = z^{1/a} with Gaussian
  // width sqrt(n*/a); terms outside +-12 widths are below 1e-17 of the peak,
  // so only that window is summed.
  const double logz = std::log(z);
  const double peak = std::pow(z, 1.0 / a);
  const long width = std::lround(std::max(1000.0, 12.0 * std::sqrt(peak / a + 10.0)));
  const long n_lo = std::max(0L, std::lround(peak) - width);
  const long n_hi = std::lround(peak) + width;

  double log_term = n_lo * logz - a * std::lgamma(static_cast<double>(n_lo) + 1.0);
  double log_sum = log_term;
  for (long n = n_lo + 1; n <= n_hi; ++n) {
    log_term += logz - a * std::log(static_cast<double>(n));
    const double diff = log_term - log_sum;
    if (diff > 0.0) {
      log_sum = log_term + std::log1p(std::exp(-diff));
    } else if (diff > -40.0) {
      log_sum += std::log1p(std::exp(diff));
    } else if (log_term < log_sum - 40.0 && n > std::lround(peak)) {
      break;
    }
  }
  return log_sum;
}

namespace {

// Per-axis nodes for int f(xi) |xi|^alpha dxi concentrated where the
// Gaussian factor exp(-2 s (xi - zeta)^2) lives.
WeightedNodes smoothing_axis_nodes(double s, double alpha, double zeta) {
  const double radius = 10.0 / std::sqrt(s);
  const double lo = zeta - radius, hi = zeta + radius;
  if (alpha == 0.0) {
    WeightedNodes out;
    const GaussRule& rule = gauss_legendre(48);
    const int panels = 24;
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        out.x.push_back(mid + 0.5 * h * rule.nodes[i]);
        out.w.push_back(0.5 * h * rule.weights[i]);
      }
    }
    return out;
  }
  return power_weighted_nodes(alpha, lo, hi, 24, 48);
}

}  // namespace

double smoothing_integral(double s, double beta, std::span<const double> zeta,
                          const NoiseSpec& spec) {
  if (!(s > 0.0)) throw std::domain_error("smoothing_integral: s must be positive");
  if (beta < 0.0) throw std::domain_error("smoothing_integral: beta must be >= 0");
  if (spec.regime != SpaceRegime::I)
    throw std::domain_error("smoothing_integral: requires a regime i spectral density");
  const int d = spec.dim();
  if (static_cast<int>(zeta.size()) != d)
    throw std::invalid_argument("smoothing_integral: zeta dimension mismatch");

  if (d == 1) {
    const WeightedNodes nodes = smoothing_axis_nodes(s, spec.alphas[0], zeta[0]);
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
      const double u = nodes.x[i] - zeta[0];
      total += nodes.w[i] * std::exp(-2.0 * s * u * u) * std::pow(std::abs(u), beta);
    }
    return spec.amplitude * total;
  }

  // d = 2: tensor product; the coupling |xi - zeta|^beta is evaluated
  // pointwise (smooth since beta >= 0).
  const WeightedNodes n0 = smoothing_axis_nodes(s, spec.alphas[0], zeta[0]);
  const WeightedNodes n1 = smoothing_axis_nodes(s, spec.alphas[1], zeta[1]);
  double total = 0.0;
  for (std::size_t i = 0; i < n0.x.size(); ++i) {
    const double u0 = n0.x[i] - zeta[0];
    double row = 0.0;
    for (std::size_t j = 0; j < n1.x.size(); ++j) {
      const double u1 = n1.x[j] - zeta[1];
      const double r2 = u0 * u0 + u1 * u1;
      row += n1.w[j] * std::exp(-2.0 * s * r2) * std::pow(r2, 0.5 * beta);
    }
    total += n0.w[i] * row;
  }
  return spec.amplitude * total;
}

}  // namespace pam
