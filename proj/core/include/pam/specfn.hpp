#ifndef PAM_SPECFN_HPP
#define PAM_SPECFN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pam/noise_spec.hpp"

namespace pam {

// Gaussian heat kernel p_t(x) = (2*pi*t)^{-d/2} exp(-|x|^2 / (2t)),
// the fundamental solution of d/dt = (1/2) Laplacian.
// Throws std::domain_error for t <= 0.
double heat_kernel(double t, std::span<const double> x);
double heat_kernel1(double t, double x);  // d = 1 convenience

// Ordered-time simplex integral over 0 < r_1 < ... < r_m < t of
// prod_i (r_i - r_{i-1})^{alpha_i}, r_0 = 0.
struct SimplexParams {
  double t = 1.0;
  std::vector<double> alphas;

  int order() const { return static_cast<int>(alphas.size()); }
  double alpha_sum() const;
  void validate() const;  // t > 0, each alpha in (-1, 1), throws std::domain_error
};

// Exact value via the Dirichlet integral identity
//   t^{|alpha|+m} * prod Gamma(alpha_i + 1) / Gamma(|alpha| + m + 1).
double simplex_integral_exact(const SimplexParams& p);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Unbiased Monte Carlo over the simplex: sorted uniform times, sample
// standard error. Deterministic per (seed, samples).
McEstimate simplex_integral_mc(const SimplexParams& p, std::size_t samples,
                               std::uint64_t seed);

// c^m t^{|alpha|+m} / Gamma(|alpha| + m + 1).
double simplex_integral_bound(const SimplexParams& p, double c);

// sum_{n>=0} z^n / (n!)^a, truncated once three consecutive terms drop
// below tol (terms are eventually decreasing). a in (0,1], z >= 0.
double mittag_leffler_sum(double a, double z, double tol = 1e-12);

// log of the same sum, evaluated stably for arguments where the sum
// overflows double (e.g. a = 1/4, z = 30).
double mittag_leffler_log_sum(double a, double z);

// sup-free smoothing integral: int e^{-2 s |xi - zeta|^2} |xi - zeta|^beta
// mu(xi) dxi over R^d for a regime-I spectral density mu. Computed by
// weighted quadrature; scales as s^{-(d + alpha + beta)/2} at zeta = 0.
double smoothing_integral(double s, double beta, std::span<const double> zeta,
                          const NoiseSpec& spec);

}  // namespace pam

#endif
