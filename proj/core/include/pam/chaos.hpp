#ifndef PAM_CHAOS_HPP
#define PAM_CHAOS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pam/noise_spec.hpp"

namespace pam {

// Initial condition with a closed-form Fourier transform.
struct InitialCondition {
  enum class Kind { ConstantOne, GaussianBump, PointMass };
  Kind kind = Kind::ConstantOne;
  double width = 1.0;  // bump width (the bump is the heat kernel p_width)

  static InitialCondition constant_one() { return {Kind::ConstantOne, 0.0}; }
  static InitialCondition gaussian_bump(double w);
  static InitialCondition point_mass() { return {Kind::PointMass, 0.0}; }

  // u0 evaluated at a point (PointMass has no pointwise value).
  double value(std::span<const double> x) const;
  // (p_t * u0)(x), the heat evolution of the initial condition.
  double heat_evolution(double t, std::span<const double> x) const;
  // |u0_hat(xi)| for the non-atomic kinds (ConstantOne is a point mass at 0).
  double fourier_abs(double xi_norm2) const;
};

struct McParams {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
};

struct ChaosEstimate {
  int n = 0;
  double t = 0.0;
  double x = 0.0;
  double variance = 0.0;   // estimate of n! |f_n(., t, x)|^2 in the noise norm
  double std_error = 0.0;
  double bound_value = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool high_error = false;  // relative stderr above 10% (reported, not fatal)
};

// n-th chaos kernel value: ordered product of heat kernels ending in the
// evolved initial condition, with the 1/n! prefactor. `points` is n*d flat,
// x is the d-dimensional evaluation point. Coincident times throw
// std::domain_error (degenerate input; samplers never produce them).
double chaos_kernel_eval(int n, std::span<const double> times,
                         std::span<const double> points, double t,
                         std::span<const double> x, const InitialCondition& u0,
                         int d = 1);

// Monte Carlo estimate of the level-n chaos variance by importance sampling
// in the Fourier representation. White time: times sampled uniformly on the
// ordered simplex; riesz time: coordinate pairs with the |s-s'|^{-alpha0}
// singularity importance-sampled. Frequencies use Gaussian proposals matched
// to the heat factors; spectral weights enter as importance ratios.
ChaosEstimate chaos_variance(int n, double t, const NoiseSpec& spec,
                             const InitialCondition& u0, McParams mc, double x = 0.0);

// Bound shape c^n t^{a2} (n!)^{-(1-alpha)/2} t^{(3-2 alpha0-alpha) n/2}
// (regime ii) or c^n t^{a2} (n!)^{alpha/2-1} t^{(4-2 alpha0-alpha) n/2}
// (regime i). alpha0 enters as 1 for white time.
double chaos_variance_bound(int n, double t, const NoiseSpec& spec, double c = 1.0,
                            double a2 = 0.0);

// Truncated second-moment series: the deterministic n = 0 term plus MC chaos
// variances up to level N, with an analytic tail bound using a constant
// fitted to the computed terms (or c_override if positive).
struct SecondMomentSeries {
  double value = 0.0;
  double tail_bound = 0.0;
  double fitted_c = 0.0;
  std::vector<ChaosEstimate> terms;
};
SecondMomentSeries second_moment_series(double t, const NoiseSpec& spec,
                                        const InitialCondition& u0, int N, McParams mc,
                                        double x = 0.0, double c_override = 0.0);

// p-th moment bound: C exp(c p^{(3-alpha)/(1-alpha)} t^{(3-2a0-alpha)/(1-alpha)})
// in regime ii (alpha < 1), C exp(c t^{(4-2a0-alpha)/(2-alpha)} p^{(4-alpha)/(2-alpha)})
// in regime i.
double moment_bound(double p, double t, const NoiseSpec& spec, double C = 1.0,
                    double c = 1.0);

// Decay exponent of s -> int [1 + |xi|^{alpha/2}] e^{-s |xi|^2} |u0_hat| dxi,
// fitted on a log-spaced s grid spanning >= 3 decades below 1. `admissible`
// reports beta < 1 - alpha0/2.
struct BetaFit {
  double beta = 0.0;
  bool admissible = false;
  double r2 = 0.0;
};
BetaFit beta_fit(const InitialCondition& u0, const NoiseSpec& spec,
                 std::span<const double> s_grid);

}  // namespace pam

#endif
