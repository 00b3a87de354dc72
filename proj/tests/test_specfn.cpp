#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pam/quadrature.hpp"
#include "pam/rng.hpp"
#include "pam/specfn.hpp"
#include "pam/stats.hpp"

using namespace pam;

TEST_CASE("heat kernel point values") {
  const double x0[1] = {0.0};
  CHECK(heat_kernel(1.0, x0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
  const double x2[2] = {0.0, 0.0};
  CHECK(heat_kernel(2.0, x2) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-12));
  CHECK(heat_kernel1(0.5, 1.0) ==
        doctest::Approx(std::pow(M_PI, -0.5) * std::exp(-1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(heat_kernel(0.0, x0), std::domain_error);
  CHECK_THROWS_AS(heat_kernel(-1.0, x0), std::domain_error);
}

TEST_CASE("heat kernel integrates to one") {
  for (double t : {0.25, 1.0, 3.0}) {
    const double R = 20.0 * std::sqrt(t);
    const double mass =
        integrate([&](double x) { return heat_kernel1(t, x); }, -R, R, 64, 48);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("heat kernel semigroup property") {
  const double s = 0.35, t = 0.8;
  for (double x : {0.0, 0.7, -1.3}) {
    const double conv = integrate(
        [&](double y) { return heat_kernel1(s, x - y) * heat_kernel1(t, y); }, -16.0,
        16.0, 64, 48);
    CHECK(conv == doctest::Approx(heat_kernel1(s + t, x)).epsilon(1e-6));
  }
}

TEST_CASE("simplex integral exact values") {
  CHECK(simplex_integral_exact({1.0, {0.0, 0.0}}) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(simplex_integral_exact({2.0, {-0.5}}) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));
  CHECK(simplex_integral_exact({1.0, {-0.5, -0.5}}) ==
        doctest::Approx(M_PI).epsilon(1e-13));
}

TEST_CASE("simplex integral exact scaling in t") {
  Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    SimplexParams p;
    p.t = rng.uniform(0.1, 4.0);
    const int m = 1 + static_cast<int>(rng.uniform() * 4.0);
    for (int i = 0; i < m; ++i) p.alphas.push_back(rng.uniform(-0.9, 0.9));
    SimplexParams unit = p;
    unit.t = 1.0;
    const double expo = p.alpha_sum() + m;
    CHECK(simplex_integral_exact(p) ==
          doctest::Approx(std::pow(p.t, expo) * simplex_integral_exact(unit))
              .epsilon(1e-12));
  }
}

TEST_CASE("simplex integral domain errors") {
  CHECK_THROWS_AS(simplex_integral_exact({1.0, {-1.0}}), std::domain_error);
  CHECK_THROWS_AS(simplex_integral_exact({1.0, {1.2}}), std::domain_error);
  CHECK_THROWS_AS(simplex_integral_exact({0.0, {0.5}}), std::domain_error);
  CHECK_THROWS_AS(simplex_integral_exact({1.0, {}}), std::domain_error);
  CHECK_THROWS_AS(simplex_integral_mc({1.0, {-1.0}}, 10000, 1), std::domain_error);
  CHECK_THROWS_AS(simplex_integral_mc({1.0, {0.0}}, 10, 1), std::invalid_argument);
}

TEST_CASE("simplex Monte Carlo matches stated examples") {
  {
    const McEstimate e = simplex_integral_mc({1.0, {0.0, 0.0}}, 200000, 11);
    CHECK(std::abs(e.value - 0.5) <= 3.0 * e.std_error + 1e-12);
  }
  {
    const McEstimate e = simplex_integral_mc({1.0, {-0.5, -0.5}}, 1000000, 12);
    CHECK(std::abs(e.value - M_PI) <= 3.0 * e.std_error);
  }
  {
    const SimplexParams p{0.5, {0.3, -0.2, 0.1}};
    const McEstimate e = simplex_integral_mc(p, 200000, 13);
    CHECK(std::abs(e.value - simplex_integral_exact(p)) <= 3.0 * e.std_error);
  }
}

TEST_CASE("simplex Monte Carlo randomized oracle sweep") {
  Rng rng(99);
  int misses = 0;
  const int cases = 12;
  for (int it = 0; it < cases; ++it) {
    SimplexParams p;
    p.t = rng.uniform(0.3, 2.5);
    const int m = 1 + static_cast<int>(rng.uniform() * 4.0);
    for (int i = 0; i < m; ++i) p.alphas.push_back(rng.uniform(-0.45, 0.9));
    const McEstimate e = simplex_integral_mc(p, 200000, 1000 + it);
    if (std::abs(e.value - simplex_integral_exact(p)) > 3.0 * e.std_error) ++misses;
  }
  // 3-sigma misses happen with probability ~0.3% per case.
  CHECK(misses <= 1);
}

TEST_CASE("simplex bound values and tightness") {
  CHECK(simplex_integral_bound({1.0, {0.0, 0.0}}, 1.0) == doctest::Approx(0.5));
  const SimplexParams one{2.0, {-0.5}};
  CHECK(simplex_integral_bound(one, std::tgamma(0.5)) ==
        doctest::Approx(simplex_integral_exact(one)).epsilon(1e-13));
  Rng rng(21);
  for (int it = 0; it < 100; ++it) {
    SimplexParams p;
    p.t = rng.uniform(0.2, 3.0);
    const int m = 1 + static_cast<int>(rng.uniform() * 4.0);
    double c = 0.0;
    for (int i = 0; i < m; ++i) {
      p.alphas.push_back(rng.uniform(-0.9, 0.9));
      c = std::max(c, std::tgamma(p.alphas.back() + 1.0));
    }
    CHECK(simplex_integral_exact(p) <= simplex_integral_bound(p, c) * (1.0 + 1e-12));
  }
}

TEST_CASE("mittag-leffler sum values") {
  CHECK(mittag_leffler_sum(1.0, 2.0, 1e-14) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-11));
  // Independent oracle: strict summation with no early stopping.
  double strict = 0.0, term = 1.0;
  for (int n = 0; n < 200; ++n) {
    strict += term;
    term *= 1.0 / std::sqrt(n + 1.0);
  }
  CHECK(strict == doctest::Approx(3.4695063145208226).epsilon(1e-12));
  CHECK(mittag_leffler_sum(0.5, 1.0, 1e-14) == doctest::Approx(strict).epsilon(1e-11));
  CHECK(mittag_leffler_log_sum(0.5, 1.0) ==
        doctest::Approx(std::log(strict)).epsilon(1e-10));
  CHECK_THROWS_AS(mittag_leffler_sum(0.0, 1.0, 1e-10), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler_sum(-0.5, 1.0, 1e-10), std::domain_error);
  CHECK_THROWS_AS(mittag_leffler_sum(0.5, -1.0, 1e-10), std::domain_error);
}

TEST_CASE("mittag-leffler monotone in z and log consistency") {
  double prev = 0.0;
  for (double z = 0.0; z <= 6.0; z += 0.5) {
    const double v = mittag_leffler_sum(0.5, z, 1e-13);
    CHECK(v >= prev);
    prev = v;
    CHECK(mittag_leffler_log_sum(0.5, z) == doctest::Approx(std::log(v)).epsilon(1e-9));
  }
}

TEST_CASE("mittag-leffler inequality with one fitted constant") {
  for (double a : {0.5, 0.75, 1.0}) {
    double logC = -1e300;
    for (double z = 0.0; z <= 12.0; z += 0.1)
      logC = std::max(logC, mittag_leffler_log_sum(a, z) - std::pow(z, 1.0 / a));
    CHECK(std::isfinite(logC));
    // Check on a shifted grid with the fitted constant.
    for (double z = 0.05; z <= 12.0; z += 0.1) {
      const double gap = mittag_leffler_log_sum(a, z) - std::pow(z, 1.0 / a) - logC;
      CHECK(gap <= 5e-3);  // smooth interpolation slack between fit nodes
    }
  }
}

TEST_CASE("smoothing integral closed forms") {
  const NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  const double z0[1] = {0.0};
  CHECK(smoothing_integral(1.0, 0.0, z0, flat) ==
        doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-10));
  CHECK(smoothing_integral(0.5, 0.0, z0, flat) ==
        doctest::Approx(std::sqrt(2.0) * std::sqrt(M_PI / 2.0)).epsilon(1e-10));
  const NoiseSpec rough = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
  CHECK(smoothing_integral(1.0, 0.0, z0, rough) ==
        doctest::Approx(std::tgamma(0.25) / std::pow(2.0, 0.25)).epsilon(1e-8));
  CHECK_THROWS_AS(smoothing_integral(0.0, 0.0, z0, flat), std::domain_error);
  CHECK_THROWS_AS(smoothing_integral(1.0, -0.5, z0, flat), std::domain_error);
}

TEST_CASE("smoothing integral log-log slope is -(d+alpha+beta)/2") {
  struct Combo {
    double alpha, beta;
  };
  for (const Combo c : {Combo{0.0, 0.0}, Combo{-0.5, 0.0}, Combo{-0.3, 0.7}}) {
    const NoiseSpec spec = NoiseSpec::regime_i({c.alpha}, TimeMode::White, 1.0);
    const double z0[1] = {0.0};
    std::vector<double> ls, lv;
    for (int i = 0; i <= 12; ++i) {
      const double s = std::pow(10.0, -3.0 + 0.25 * i);
      ls.push_back(std::log(s));
      lv.push_back(std::log(smoothing_integral(s, c.beta, z0, spec)));
    }
    const LineFit fit = fit_line(ls, lv);
    CHECK(fit.slope == doctest::Approx(-0.5 * (1.0 + c.alpha + c.beta)).epsilon(1e-5));
    CHECK(fit.r2 > 0.9999);
  }
}

TEST_CASE("smoothing integral d=2 factorizes at beta=0") {
  const NoiseSpec spec2 = NoiseSpec::regime_i({-0.4, -0.2}, TimeMode::White, 1.0);
  const double z2[2] = {0.3, -0.8};
  const double v2 = smoothing_integral(0.7, 0.0, z2, spec2);
  const NoiseSpec a1 = NoiseSpec::regime_i({-0.4}, TimeMode::White, 1.0);
  const NoiseSpec a2 = NoiseSpec::regime_i({-0.2}, TimeMode::White, 1.0);
  const double za[1] = {0.3}, zb[1] = {-0.8};
  CHECK(v2 == doctest::Approx(smoothing_integral(0.7, 0.0, za, a1) *
                              smoothing_integral(0.7, 0.0, zb, a2))
                  .epsilon(1e-8));
}

TEST_CASE("smoothing integral shifted center") {
  // Flat density: translation invariant, matches sqrt(pi/(2s)).
  const NoiseSpec flat = NoiseSpec::regime_i({0.0}, TimeMode::White, 1.0);
  const double zc[1] = {2.7};
  CHECK(smoothing_integral(2.0, 0.0, zc, flat) ==
        doctest::Approx(std::sqrt(M_PI / 4.0)).epsilon(1e-10));
  // Singular density with center away from the singularity: plain quadrature
  // oracle on the same integrand.
  const NoiseSpec rough = NoiseSpec::regime_i({-0.5}, TimeMode::White, 1.0);
  const double zeta = 1.4, s = 1.0;
  const double oracle =
      integrate_power_weight(
          [&](double xi) { return std::exp(-2.0 * s * (xi - zeta) * (xi - zeta)); }, -0.5,
          12.0, 48, 48) +
      integrate_power_weight(
          [&](double xi) { return std::exp(-2.0 * s * (xi + zeta) * (xi + zeta)); }, -0.5,
          12.0, 48, 48);
  const double zc2[1] = {zeta};
  CHECK(smoothing_integral(s, 0.0, zc2, rough) == doctest::Approx(oracle).epsilon(1e-7));
}
