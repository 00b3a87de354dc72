#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "pam/noise.hpp"
#include "pam/rng.hpp"
#include "pam/specfn.hpp"
#include "pam/stats.hpp"

using namespace pam;

namespace {

// Composite Simpson, independent of the library quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; i += 2) s += 4.0 * f(a + i * h);
  for (int i = 2; i < n; i += 2) s += 2.0 * f(a + i * h);
  return s * h / 3.0;
}

GridSpec small_grid() { return {1, 16.0, 128, 0.01, 1.0}; }

// Bound-formula parameters may sit on the hypothesis boundary (e.g. white
// time with alpha = 1/2); construct without the model validator.
NoiseSpec formula_regime_ii(double alpha, double a0) {
  NoiseSpec s;
  s.time_mode = a0 == 1.0 ? TimeMode::White : TimeMode::Riesz;
  s.alpha0 = a0;
  s.regime = SpaceRegime::II;
  s.alpha_ii = alpha;
  return s;
}

}  // namespace

TEST_CASE("spectral density values") {
  const NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  const double a[1] = {3.7};
  CHECK(spectral_density(flat, a) == doctest::Approx(1.0));
  const NoiseSpec rii = formula_regime_ii(0.5, 1.0);
  const double b[1] = {4.0};
  CHECK(spectral_density(rii, b) == doctest::Approx(2.0));
  const NoiseSpec neg = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
  CHECK(spectral_density(neg, b) == doctest::Approx(0.5));
  const double zero[1] = {0.0};
  CHECK(std::isinf(spectral_density(neg, zero)));
  CHECK(spectral_density(rii, zero) == doctest::Approx(0.0));
}

TEST_CASE("noise spec invariants") {
  CHECK_THROWS_AS(NoiseSpec::regime_i({0.5}, TimeMode::White, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSpec::regime_i({-1.0}, TimeMode::White, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSpec::regime_ii(1.6, TimeMode::White, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSpec::regime_ii(0.5, TimeMode::Riesz, 0.0), std::invalid_argument);
  // Field ranges pass but the solution-existence hypothesis fails.
  const NoiseSpec joint = NoiseSpec::regime_ii(1.2, TimeMode::Riesz, 0.4);
  CHECK_THROWS_AS(joint.validate_hypothesis(), std::invalid_argument);
  const NoiseSpec boundary = NoiseSpec::regime_ii(0.5, TimeMode::White, 1.0);
  CHECK_THROWS_AS(boundary.validate_hypothesis(), std::invalid_argument);
  CHECK(NoiseSpec::regime_ii(0.25, TimeMode::White, 1.0).alpha_sum() ==
        doctest::Approx(0.25));
  NoiseSpec::regime_ii(0.25, TimeMode::White, 1.0).validate_hypothesis();  // fine
  CHECK(NoiseSpec::white_preset(1).is_space_time_white());
  CHECK(NoiseSpec::white_preset(1).amplitude == doctest::Approx(1.0 / (2.0 * M_PI)));
  CHECK_FALSE(NoiseSpec::regime_i({-0.1}, TimeMode::White, 1.0).is_space_time_white());
}

TEST_CASE("time covariance kernel") {
  const NoiseSpec riesz = NoiseSpec::regime_i({0.0}, TimeMode::Riesz, 0.5);
  CHECK(time_covariance(riesz, 4.0).value == doctest::Approx(0.5));
  CHECK(time_covariance(riesz, -4.0).value == doctest::Approx(0.5));
  CHECK_FALSE(time_covariance(riesz, 4.0).dirac);
  CHECK_THROWS_AS(time_covariance(riesz, 0.0), std::domain_error);
  const NoiseSpec white = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  const TimeCovariance tc = time_covariance(white, 0.7);
  CHECK(tc.value == 0.0);
  CHECK(tc.dirac);
}

TEST_CASE("analytic test variance closed forms") {
  const NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  CHECK(analytic_test_variance(flat, 1.0, 1.0) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(analytic_test_variance(flat, 2.0, 1.0) ==
        doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(1e-13));
  const NoiseSpec riesz = NoiseSpec::regime_i({0.0}, TimeMode::Riesz, 0.5);
  CHECK(analytic_test_variance(riesz, 1.0, 1.0) ==
        doctest::Approx(8.0 / 3.0 * std::sqrt(M_PI)).epsilon(1e-13));
  // Riesz time factor vs quadrature with the singularity removed by u = v^2:
  // int_0^1 [int_0^s + int_0^{1-s}] |u|^{-1/2} du ds = int_0^1 2(sqrt(s) +
  // sqrt(1-s)) ds.
  const double brute = simpson(
      [&](double s) { return 2.0 * (std::sqrt(s) + std::sqrt(1.0 - s)); }, 0.0, 1.0,
      4000);
  CHECK(analytic_test_variance(riesz, 1.0, 1.0) ==
        doctest::Approx(brute * std::sqrt(M_PI)).epsilon(1e-6));
}

TEST_CASE("synthesis is deterministic per seed") {
  const NoiseSpec spec = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
  const GridSpec grid = small_grid();
  const NoisePath a = sample_noise_path(spec, grid, 42);
  const NoisePath b = sample_noise_path(spec, grid, 42);
  CHECK(a.increments == b.increments);  // bit-identical
  const NoisePath c = sample_noise_path(spec, grid, 43);
  CHECK(a.increments != c.increments);
}

TEST_CASE("parseval: physical sum of squares equals spectral sum") {
  // Naive DFT oracle, independent of FFTW.
  const NoiseSpec spec = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  GridSpec grid = small_grid();
  grid.N = 64;
  const NoisePath path = sample_noise_path(spec, grid, 5);
  const int N = grid.N;
  std::vector<std::complex<double>> dft(N);
  const std::span<const double> x = path.slice(7);
  double phys = 0.0;
  for (int j = 0; j < N; ++j) phys += x[j] * x[j];
  for (int k = 0; k < N; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < N; ++j)
      acc += x[j] * std::polar(1.0, -2.0 * M_PI * j * k / N);
    dft[k] = acc;
  }
  double spectral = 0.0;
  for (int k = 0; k < N; ++k) spectral += std::norm(dft[k]);
  CHECK(phys == doctest::Approx(spectral / N).epsilon(1e-10));
}

TEST_CASE("weight sum equals per-point variance (white, empirically)") {
  const NoiseSpec spec = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
  GridSpec grid = small_grid();
  SpatialSynthesizer synth(spec, grid);
  Rng rng(17);
  std::vector<double> field(grid.points());
  std::vector<double> vals;
  for (int r = 0; r < 4000; ++r) {
    synth.sample(rng, field);
    vals.push_back(field[31]);
  }
  const VarianceEstimate v = variance_with_jackknife(vals);
  CHECK(std::abs(v.variance - synth.weight_sum()) <= 3.0 * v.std_error);
}

TEST_CASE("probe variance matches analytic value, white flat") {
  const NoiseSpec spec = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  const GridSpec grid = small_grid();
  NoisePathSampler sampler(spec, grid);
  const GaussianProbe probe{1.0, 1.0, {}};
  std::vector<double> vals;
  for (int r = 0; r < 1500; ++r)
    vals.push_back(probe_pairing(sampler.sample(Rng::for_replica(3001, r).next_u64()),
                                 probe));
  const VarianceEstimate v = variance_with_jackknife(vals);
  const double analytic = analytic_test_variance(spec, 1.0, 1.0);
  CHECK(std::abs(v.variance - analytic) <= 3.0 * v.std_error + 0.02 * analytic);
}

TEST_CASE("probe variance matches analytic value, riesz time") {
  const NoiseSpec spec = NoiseSpec::regime_i({0.0}, TimeMode::Riesz, 0.5);
  const GridSpec grid = small_grid();
  NoisePathSampler sampler(spec, grid);
  const GaussianProbe probe{1.0, 1.0, {}};
  std::vector<double> vals;
  for (int r = 0; r < 1200; ++r)
    vals.push_back(probe_pairing(sampler.sample(Rng::for_replica(3002, r).next_u64()),
                                 probe));
  const VarianceEstimate v = variance_with_jackknife(vals);
  const double analytic = analytic_test_variance(spec, 1.0, 1.0);
  CHECK(std::abs(v.variance - analytic) <= 3.0 * v.std_error + 0.02 * analytic);
}

TEST_CASE("probe variance with singular spectrum (zero-mode cell average)") {
  const NoiseSpec spec = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
  const GridSpec grid = small_grid();
  NoisePathSampler sampler(spec, grid);
  const GaussianProbe probe{1.0, 1.0, {}};
  std::vector<double> vals;
  for (int r = 0; r < 1500; ++r)
    vals.push_back(probe_pairing(sampler.sample(Rng::for_replica(3003, r).next_u64()),
                                 probe));
  const VarianceEstimate v = variance_with_jackknife(vals);
  const double analytic = analytic_test_variance(spec, 1.0, 1.0);
  CHECK(std::abs(v.variance - analytic) <= 3.0 * v.std_error + 0.02 * analytic);
}

TEST_CASE("probe variance in two dimensions") {
  NoiseSpec spec = NoiseSpec::regime_i({0.0, -0.3}, TimeMode::White, 1.0);
  GridSpec grid{2, 8.0, 64, 0.005, 0.5};
  NoisePathSampler sampler(spec, grid);
  const GaussianProbe probe{0.5, 0.5, {0.0, 0.0}};
  std::vector<double> vals;
  for (int r = 0; r < 1000; ++r)
    vals.push_back(probe_pairing(sampler.sample(Rng::for_replica(3004, r).next_u64()),
                                 probe));
  const VarianceEstimate v = variance_with_jackknife(vals);
  const double analytic = analytic_test_variance(spec, 0.5, 0.5);
  CHECK(std::abs(v.variance - analytic) <= 3.0 * v.std_error + 0.02 * analytic);
}

TEST_CASE("temporal cell covariance") {
  const NoiseSpec white = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  GridSpec grid = small_grid();
  const std::vector<double> cw = temporal_cell_covariance(white, grid);
  const int m = grid.steps();
  CHECK(cw[0] == doctest::Approx(grid.dt));
  CHECK(cw[1] == 0.0);
  CHECK(cw[static_cast<std::size_t>(m) * 3 + 3] == doctest::Approx(grid.dt));

  const NoiseSpec riesz = NoiseSpec::regime_i({0.0}, TimeMode::Riesz, 0.5);
  const std::vector<double> cr = temporal_cell_covariance(riesz, grid);
  // Brute-force cell integrals for a few entries.
  auto brute = [&](int j, int k) {
    const double dt = grid.dt;
    return simpson(
        [&](double s) {
          return simpson(
              [&](double t) {
                const double u = std::abs(s - t);
                return u == 0.0 ? 0.0 : std::pow(u, -0.5);
              },
              k * dt, (k + 1) * dt, 400);
        },
        j * dt + 1e-12, (j + 1) * dt - 1e-12, 400);
  };
  CHECK(cr[static_cast<std::size_t>(2) * m + 5] ==
        doctest::Approx(brute(2, 5)).epsilon(1e-6));
  // Singular diagonal cell in closed form: (8/3) dt^{3/2}.
  CHECK(cr[static_cast<std::size_t>(4) * m + 4] ==
        doctest::Approx(8.0 / 3.0 * std::pow(grid.dt, 1.5)).epsilon(1e-12));
}

TEST_CASE("empirical covariance estimator") {
  const NoiseSpec spec = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  const GridSpec grid = small_grid();
  NoisePathSampler sampler(spec, grid);
  std::vector<NoisePath> paths;
  for (int r = 0; r < 400; ++r)
    paths.push_back(sampler.sample(Rng::for_replica(3005, r).next_u64()));
  const std::vector<GaussianProbe> probes{
      {1.0, 1.0, {0.0}}, {1.0, 0.05, {-4.0}}, {1.0, 0.05, {4.0}}};
  const CovarianceMatrix cov = empirical_covariance(paths, probes);
  const double analytic = analytic_test_variance(spec, 1.0, 1.0);
  CHECK(std::abs(cov.at(0, 0).variance - analytic) <=
        3.0 * cov.at(0, 0).std_error + 0.02 * analytic);
  CHECK(std::abs(cov.at(1, 2).variance) <= 3.0 * cov.at(1, 2).std_error);
  CHECK_THROWS_AS(empirical_covariance(std::span<const NoisePath>(paths.data(), 1),
                                       probes),
                  std::invalid_argument);
}

TEST_CASE("covariance linear in amplitude") {
  NoiseSpec spec = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  const GridSpec grid = small_grid();
  NoiseSpec doubled = spec;
  doubled.amplitude = 2.0;
  const GaussianProbe probe{1.0, 1.0, {}};
  // Same seed: fields scale exactly by sqrt(2), covariance exactly by 2.
  const double v1 = probe_pairing(sample_noise_path(spec, grid, 77), probe);
  const double v2 = probe_pairing(sample_noise_path(doubled, grid, 77), probe);
  CHECK(v2 * v2 == doctest::Approx(2.0 * v1 * v1).epsilon(1e-12));
}

TEST_CASE("analytic probe covariance oracle agrees with variance form") {
  const NoiseSpec spec = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
  const GaussianProbe p{1.0, 1.0, {0.0}};
  CHECK(analytic_probe_covariance(spec, p, p) ==
        doctest::Approx(analytic_test_variance(spec, 1.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("capacity and validation errors") {
  const NoiseSpec riesz = NoiseSpec::regime_i({0.0}, TimeMode::Riesz, 0.5);
  GridSpec grid{1, 800.0, 128, 0.0001, 1.0};  // 10000 steps
  CHECK_THROWS_AS(sample_noise_path(riesz, grid, 1), std::runtime_error);
  GridSpec bad = small_grid();
  bad.N = 100;  // not a power of two
  const NoiseSpec white = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  CHECK_THROWS_AS(sample_noise_path(white, bad, 1), std::invalid_argument);
}
