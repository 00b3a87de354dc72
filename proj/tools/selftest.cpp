#include "selftest.hpp"

#include <cmath>
#include <iomanip>

#include "pam/chaos.hpp"
#include "pam/io.hpp"
#include "pam/noise.hpp"
#include "pam/quadrature.hpp"
#include "pam/rng.hpp"
#include "pam/specfn.hpp"
#include "pam/stats.hpp"

namespace pamlab {

using namespace pam;

namespace {

// Formula parameters on the hypothesis boundary bypass the model validator.
NoiseSpec formula_regime_ii(double alpha, double a0) {
  NoiseSpec s;
  s.time_mode = a0 == 1.0 ? TimeMode::White : TimeMode::Riesz;
  s.alpha0 = a0;
  s.regime = SpaceRegime::II;
  s.alpha_ii = alpha;
  return s;
}

struct Battery {
  std::vector<CheckRow> rows;
  std::uint64_t seed;

  void eq(const std::string& name, double observed, double expected, double tol) {
    rows.push_back({name, observed, expected, tol, std::abs(observed - expected) <= tol});
  }
  void le(const std::string& name, double observed, double limit) {
    rows.push_back({name, observed, limit, 0.0, observed <= limit});
  }
};

void specfn_checks(Battery& b, bool quick) {
  const double x0[1] = {0.0};
  b.eq("heat_kernel t=1 x=0 d=1", heat_kernel(1.0, x0), 0.3989422804014327, 1e-12);
  const double x2[2] = {0.0, 0.0};
  b.eq("heat_kernel t=2 x=0 d=2", heat_kernel(2.0, x2), 0.07957747154594767, 1e-12);
  {
    const double t = 0.7;
    const double mass = integrate(
        [&](double x) { return heat_kernel1(t, x); }, -20.0 * std::sqrt(t),
        20.0 * std::sqrt(t), 64, 48);
    b.eq("heat_kernel normalization", mass, 1.0, 1e-8);
  }
  {
    // Semigroup: int p_s(x-y) p_t(y) dy = p_{s+t}(x).
    const double s = 0.3, t = 0.5, x = 0.4;
    const double conv = integrate(
        [&](double y) { return heat_kernel1(s, x - y) * heat_kernel1(t, y); }, -14.0, 14.0,
        64, 48);
    b.eq("heat_kernel semigroup", conv, heat_kernel1(s + t, x), 1e-6);
  }

  b.eq("simplex_exact t=1 a=(0,0)", simplex_integral_exact({1.0, {0.0, 0.0}}), 0.5, 1e-12);
  b.eq("simplex_exact t=2 a=(-1/2)", simplex_integral_exact({2.0, {-0.5}}),
       2.0 * std::sqrt(2.0), 1e-12);
  b.eq("simplex_exact t=1 a=(-1/2,-1/2)", simplex_integral_exact({1.0, {-0.5, -0.5}}),
       M_PI, 1e-12);

  const std::size_t mc_n = quick ? 100000 : 1000000;
  {
    const SimplexParams p{1.0, {0.0, 0.0}};
    const McEstimate est = simplex_integral_mc(p, mc_n, b.seed + 11);
    b.eq("simplex_mc t=1 a=(0,0)", est.value, 0.5, 3.0 * est.std_error + 1e-9);
  }
  {
    const SimplexParams p{1.0, {-0.5, -0.5}};
    const McEstimate est = simplex_integral_mc(p, mc_n, b.seed + 12);
    b.eq("simplex_mc t=1 a=(-1/2,-1/2)", est.value, M_PI, 3.0 * est.std_error);
  }
  {
    const SimplexParams p{0.5, {0.3, -0.2, 0.1}};
    const McEstimate est = simplex_integral_mc(p, mc_n, b.seed + 13);
    b.eq("simplex_mc t=0.5 a=(0.3,-0.2,0.1)", est.value, simplex_integral_exact(p),
         3.0 * est.std_error);
  }

  b.eq("simplex_bound t=1 a=(0,0) c=1", simplex_integral_bound({1.0, {0.0, 0.0}}, 1.0),
       0.5, 1e-12);
  {
    // c = max Gamma(a_i+1) makes exact/bound <= 1; m = 1 is tight.
    Rng rng(b.seed + 14);
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
      SimplexParams p;
      p.t = rng.uniform(0.2, 3.0);
      const int m = 1 + static_cast<int>(rng.uniform() * 4.0);
      for (int i = 0; i < m; ++i) p.alphas.push_back(rng.uniform(-0.9, 0.9));
      double c = 0.0;
      for (double a : p.alphas) c = std::max(c, std::tgamma(a + 1.0));
      worst = std::max(worst,
                       simplex_integral_exact(p) / simplex_integral_bound(p, c));
    }
    b.le("simplex exact/bound ratio sweep", worst, 1.0 + 1e-12);
    const SimplexParams tight{2.0, {-0.5}};
    b.eq("simplex bound tight at m=1",
         simplex_integral_bound(tight, std::tgamma(0.5)),
         simplex_integral_exact(tight), 1e-12);
  }

  b.eq("mittag_leffler a=1 z=2", mittag_leffler_sum(1.0, 2.0, 1e-14),
       std::exp(2.0), 1e-10);
  b.eq("mittag_leffler a=1/2 z=1", mittag_leffler_sum(0.5, 1.0, 1e-14),
       3.4695063145208226, 1e-10);
  {
    // One constant bounds the sum by C exp(z^{1/a}) over a small sweep.
    double logC = -1e300;
    for (double z = 0.0; z <= 10.0; z += 0.125)
      logC = std::max(logC, mittag_leffler_log_sum(0.5, z) - z * z);
    const double gap = mittag_leffler_log_sum(0.5, 4.0) - (logC + 16.0);
    b.le("mittag_leffler bound a=1/2 z=4", gap, 1e-9);
  }

  {
    NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
    const double z0[1] = {0.0};
    b.eq("smoothing s=1 b=0 mu=1", smoothing_integral(1.0, 0.0, z0, flat),
         std::sqrt(M_PI / 2.0), 1e-9);
    b.eq("smoothing halving s scales sqrt2",
         smoothing_integral(0.5, 0.0, z0, flat),
         std::sqrt(2.0) * smoothing_integral(1.0, 0.0, z0, flat), 1e-9);
    NoiseSpec rough = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
    b.eq("smoothing s=1 b=0 a=-1/2", smoothing_integral(1.0, 0.0, z0, rough),
         3.0487623749344797, 1e-7);
  }
}

void noise_checks(Battery& b, bool quick) {
  {
    NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
    const double xi[1] = {3.7};
    b.eq("spectral_density flat", spectral_density(flat, xi), 1.0, 1e-15);
    NoiseSpec rii = formula_regime_ii(0.5, 1.0);
    const double xi4[1] = {4.0};
    b.eq("spectral_density |xi|^1/2", spectral_density(rii, xi4), 2.0, 1e-12);
    NoiseSpec neg = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
    b.eq("spectral_density |xi|^-1/2", spectral_density(neg, xi4), 0.5, 1e-12);
  }
  {
    NoiseSpec riesz = NoiseSpec::regime_i({0.0}, TimeMode::Riesz, 0.5);
    b.eq("time_covariance riesz tau=4", time_covariance(riesz, 4.0).value, 0.5, 1e-12);
    b.eq("time_covariance riesz tau=-4", time_covariance(riesz, -4.0).value, 0.5, 1e-12);
    NoiseSpec white = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
    const TimeCovariance tc = time_covariance(white, 0.3);
    b.eq("time_covariance white off-zero", tc.value, 0.0, 0.0);
    b.le("time_covariance white dirac flag", tc.dirac ? 0.0 : 1.0, 0.0);
  }
  {
    NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
    b.eq("analytic_variance white flat", analytic_test_variance(flat, 1.0, 1.0),
         std::sqrt(M_PI), 1e-12);
    b.eq("analytic_variance doubles with T", analytic_test_variance(flat, 2.0, 1.0),
         2.0 * analytic_test_variance(flat, 1.0, 1.0), 1e-12);
    NoiseSpec riesz = NoiseSpec::regime_i({0.0}, TimeMode::Riesz, 0.5);
    b.eq("analytic_variance riesz a0=1/2", analytic_test_variance(riesz, 1.0, 1.0),
         8.0 / 3.0 * std::sqrt(M_PI), 1e-12);
  }
  {
    // Sampled-noise calibration on a small grid.
    NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
    GridSpec grid{1, 16.0, 128, 0.01, 1.0};
    const int R = quick ? 600 : 1500;
    GaussianProbe probe{1.0, 1.0, {}};
    std::vector<double> vals(R), at_point(R), lag1(R);
    for (int r = 0; r < R; ++r) {
      const NoisePath path = sample_noise_path(
          flat, grid, Rng::for_replica(b.seed + 21, r).next_u64());
      vals[r] = probe_pairing(path, probe);
      at_point[r] = path.slice(3)[17];
      double acc = 0.0;
      for (int k = 0; k + 1 < grid.steps(); ++k)
        acc += path.slice(k)[17] * path.slice(k + 1)[17];
      lag1[r] = acc / (grid.steps() - 1);
    }
    const VarianceEstimate var = variance_with_jackknife(vals);
    const double analytic = analytic_test_variance(flat, 1.0, 1.0);
    b.eq("sampled probe variance (white flat)", var.variance, analytic,
         3.0 * var.std_error + 0.02 * analytic);
    const MeanStdErr mean_pt = mean_and_stderr(at_point);
    b.eq("sampled field mean at fixed point", mean_pt.mean, 0.0,
         3.0 * mean_pt.std_error);
    const MeanStdErr lag = mean_and_stderr(lag1);
    b.eq("white slices lag-1 covariance", lag.mean, 0.0, 3.0 * lag.std_error);
  }
  {
    // Covariance estimator: disjoint probes decorrelate, amplitude is linear.
    NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
    GridSpec grid{1, 16.0, 128, 0.01, 1.0};
    const int R = quick ? 300 : 600;
    std::vector<NoisePath> paths;
    paths.reserve(R);
    for (int r = 0; r < R; ++r)
      paths.push_back(
          sample_noise_path(flat, grid, Rng::for_replica(b.seed + 22, r).next_u64()));
    std::vector<GaussianProbe> probes{{1.0, 1.0, {0.0}},
                                      {1.0, 0.05, {-4.0}},
                                      {1.0, 0.05, {4.0}}};
    const CovarianceMatrix cov = empirical_covariance(paths, probes);
    const double analytic = analytic_test_variance(flat, 1.0, 1.0);
    b.eq("empirical self-covariance vs analytic", cov.at(0, 0).variance, analytic,
         3.0 * cov.at(0, 0).std_error + 0.02 * analytic);
    b.eq("disjoint probes decorrelate", cov.at(1, 2).variance, 0.0,
         3.0 * cov.at(1, 2).std_error);
  }
}

void chaos_checks(Battery& b, bool quick) {
  {
    const double times1[1] = {1e-9};
    const double pts1[1] = {0.2};
    const double x[1] = {0.2};
    b.eq("chaos_kernel n=1 s->0",
         chaos_kernel_eval(1, times1, pts1, 1.0, x, InitialCondition::constant_one()),
         0.3989422804014327, 1e-6);
    const double times2[2] = {0.2, 0.7};
    const double pts2[2] = {0.0, 0.0};
    const double x0[1] = {0.0};
    const double expected_n2 =
        0.5 * std::pow(2.0 * M_PI * 0.3, -0.5) * std::pow(2.0 * M_PI * 0.5, -0.5);
    b.eq("chaos_kernel n=2 product",
         chaos_kernel_eval(2, times2, pts2, 1.0, x0, InitialCondition::constant_one()),
         expected_n2, 1e-12);
    const double swapped[2] = {0.7, 0.2};
    b.eq("chaos_kernel swap symmetry",
         chaos_kernel_eval(2, swapped, pts2, 1.0, x0, InitialCondition::constant_one()),
         chaos_kernel_eval(2, times2, pts2, 1.0, x0, InitialCondition::constant_one()),
         1e-15);
  }
  {
    const NoiseSpec preset = NoiseSpec::white_preset(1);
    const std::size_t n_mc = quick ? 100000 : 400000;
    for (int n = 1; n <= 3; ++n) {
      const ChaosEstimate est = chaos_variance(n, 1.0, preset,
                                               InitialCondition::constant_one(),
                                               {n_mc, b.seed + 30 + n});
      const double exact = std::pow(1.0, 0.5 * n) /
                           (std::pow(2.0, n) * std::tgamma(0.5 * n + 1.0));
      b.eq("chaos_variance white preset n=" + std::to_string(n), est.variance, exact,
           std::max(3.0 * est.std_error, 0.02 * exact));
    }
  }
  {
    const NoiseSpec rii = formula_regime_ii(0.5, 1.0);
    b.eq("chaos_bound regime ii n=2", chaos_variance_bound(2, 1.0, rii),
         std::pow(2.0, -0.25), 1e-12);
    const NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
    b.eq("chaos_bound regime i n=1", chaos_variance_bound(1, 1.0, flat), 1.0, 1e-12);
    b.le("chaos_bound factorial decay",
         chaos_variance_bound(9, 1.0, rii) / chaos_variance_bound(8, 1.0, rii), 1.0);
  }
  {
    const NoiseSpec preset = NoiseSpec::white_preset(1);
    const std::size_t n_mc = quick ? 50000 : 200000;
    const SecondMomentSeries s1 =
        second_moment_series(1.0, preset, InitialCondition::constant_one(), 6,
                             {n_mc, b.seed + 41});
    b.eq("second_moment_series t=1", s1.value + s1.tail_bound, 1.9523604891816568,
         0.02 * 1.9523604891816568);
    const SecondMomentSeries s2 =
        second_moment_series(0.25, preset, InitialCondition::constant_one(), 6,
                             {n_mc, b.seed + 42});
    b.eq("second_moment_series t=0.25", s2.value + s2.tail_bound, 1.3586423701195161,
         0.02 * 1.3586423701195161);
    const SecondMomentSeries s3 =
        second_moment_series(1e-5, preset, InitialCondition::constant_one(), 3,
                             {n_mc, b.seed + 43});
    b.eq("second_moment_series t->0", s3.value, 1.0, 5e-3);
  }
  {
    const NoiseSpec rii = formula_regime_ii(0.5, 1.0);
    b.eq("moment_bound regime ii p=2", moment_bound(2.0, 1.0, rii), std::exp(32.0),
         1e-6 * std::exp(32.0));
    const NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
    b.eq("moment_bound regime i p=2", moment_bound(2.0, 1.0, flat), std::exp(4.0),
         1e-9 * std::exp(4.0));
    b.le("moment_bound nondecreasing in p",
         moment_bound(2.0, 1.0, rii) / moment_bound(2.5, 1.0, rii), 1.0);
  }
  {
    auto log_grid = [](double lo_exp, double hi_exp, int n) {
      std::vector<double> g;
      for (int i = 0; i <= n; ++i)
        g.push_back(std::pow(10.0, lo_exp + i * (hi_exp - lo_exp) / n));
      return g;
    };
    const NoiseSpec rii = formula_regime_ii(0.5, 1.0);
    const BetaFit bf1 =
        beta_fit(InitialCondition::constant_one(), rii, log_grid(-3.5, 0.0, 20));
    b.eq("beta_fit constant", bf1.beta, 0.0, 1e-12);
    const BetaFit bf2 =
        beta_fit(InitialCondition::gaussian_bump(1.0), rii, log_grid(-6.0, -3.0, 12));
    b.eq("beta_fit gaussian bump", bf2.beta, 0.0, 0.02);
    const BetaFit bf3 =
        beta_fit(InitialCondition::point_mass(), rii, log_grid(-22.0, -16.0, 12));
    b.eq("beta_fit point mass alpha=1/2", bf3.beta, 0.625, 0.02);
  }
}

}  // namespace

std::vector<CheckRow> run_selftest(std::uint64_t master_seed, bool quick) {
  Battery b;
  b.seed = master_seed;
  specfn_checks(b, quick);
  noise_checks(b, quick);
  chaos_checks(b, quick);
  return b.rows;
}

std::string selftest_csv(const std::vector<CheckRow>& rows) {
  std::string out = "name,observed,expected,tolerance,pass\n";
  for (const CheckRow& r : rows) {
    out += r.name + ',' + pam::format_number(r.observed) + ',' +
           pam::format_number(r.expected) + ',' + pam::format_number(r.tolerance) + ',' +
           (r.pass ? '1' : '0') + '\n';
  }
  return out;
}

void print_selftest(const std::vector<CheckRow>& rows, std::ostream& out) {
  int failures = 0;
  for (const CheckRow& r : rows) {
    out << (r.pass ? "[ ok ] " : "[FAIL] ") << std::left << std::setw(44) << r.name
        << " observed=" << pam::format_number(r.observed)
        << " expected=" << pam::format_number(r.expected);
    if (r.tolerance > 0.0) out << " tol=" << pam::format_number(r.tolerance);
    out << '\n';
    if (!r.pass) ++failures;
  }
  out << rows.size() - failures << "/" << rows.size() << " checks passed\n";
}

}  // namespace pamlab
