#ifndef PAM_NOISE_HPP
#define PAM_NOISE_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pam/grid.hpp"
#include "pam/noise_spec.hpp"
#include "pam/rng.hpp"
#include "pam/stats.hpp"

namespace pam {

// Spectral density mu(xi). For regime I with a negative exponent this is
// +infinity at xi = 0; discrete synthesis replaces that mode by its exact
// cell mass, never this point value.
double spectral_density(const NoiseSpec& spec, std::span<const double> xi);

// Temporal covariance kernel gamma_0. White time is a Dirac at 0: the
// returned value is 0 for tau != 0 and `dirac` is set so quadrature
// routines can collapse the double time integral.
struct TimeCovariance {
  double value = 0.0;
  bool dirac = false;
};
TimeCovariance time_covariance(const NoiseSpec& spec, double tau);

// Test function 1_{[0,horizon]}(s) * p_width(x - center).
struct GaussianProbe {
  double horizon = 1.0;
  double width = 1.0;
  std::vector<double> center;  // empty = origin
};

// Var W(phi) for the probe above, by closed-form evaluation of the noise
// inner product (time factor x spectral integral).
double analytic_test_variance(const NoiseSpec& spec, double horizon, double width);

// Covariance of two probe integrals (test oracle; quadrature in space).
double analytic_probe_covariance(const NoiseSpec& spec, const GaussianProbe& a,
                                 const GaussianProbe& b);

// Stationary Gaussian field on the periodic grid with discrete spectral
// weights equal to the exact cell mass of mu around each mode (times
// (2 pi / L)^d via the cell integral). One instance per worker thread;
// sampling is deterministic per Rng stream.
class SpatialSynthesizer {
 public:
  SpatialSynthesizer(const NoiseSpec& spec, const GridSpec& grid);
  ~SpatialSynthesizer();
  SpatialSynthesizer(SpatialSynthesizer&&) noexcept;
  SpatialSynthesizer& operator=(SpatialSynthesizer&&) noexcept;

  void sample(Rng& rng, std::span<double> out);
  // Sum of discrete spectral weights = per-point field variance.
  double weight_sum() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

// Discrete noise increments over all time steps of the grid, time-major,
// row-major in space. White time: slices are i.i.d. spatial fields scaled
// by sqrt(dt). Riesz time: rows mixed by the symmetric square root of the
// exact cell-averaged temporal covariance matrix.
struct NoisePath {
  NoiseSpec spec;
  GridSpec grid;
  std::uint64_t seed = 0;
  std::vector<double> increments;

  std::span<const double> slice(int step) const {
    const int p = grid.points();
    return {increments.data() + static_cast<std::size_t>(step) * p,
            static_cast<std::size_t>(p)};
  }
};

// Reusable sampler: spectral weights, FFT plans and (for riesz time) the
// temporal factorization are built once. sample(seed) is a pure function of
// the seed. One instance per worker thread.
class NoisePathSampler {
 public:
  NoisePathSampler(const NoiseSpec& spec, const GridSpec& grid);
  ~NoisePathSampler();
  NoisePathSampler(NoisePathSampler&&) noexcept;

  NoisePath sample(std::uint64_t seed);

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

NoisePath sample_noise_path(const NoiseSpec& spec, const GridSpec& grid,
                            std::uint64_t seed);

// Temporal covariance of step increments: integral of gamma_0 over the
// [t_j, t_{j+1}] x [t_k, t_{k+1}] cell (dt * identity for white time).
// Returned row-major steps x steps.
std::vector<double> temporal_cell_covariance(const NoiseSpec& spec, const GridSpec& grid);

// Discrete pairing W(phi) ~ sum over steps and cells of increments times
// probe values times the cell volume.
double probe_pairing(const NoisePath& path, const GaussianProbe& probe);

// Sample covariance matrix of probe pairings with jackknife errors.
struct CovarianceMatrix {
  int n = 0;
  std::vector<VarianceEstimate> entries;  // row-major n x n
  const VarianceEstimate& at(int i, int j) const { return entries[i * n + j]; }
};
CovarianceMatrix empirical_covariance(std::span<const NoisePath> paths,
                                      std::span<const GaussianProbe> probes);

}  // namespace pam

#endif
