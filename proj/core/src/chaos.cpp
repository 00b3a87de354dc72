#include "pam/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pam/quadrature.hpp"
#include "pam/rng.hpp"
#include "pam/specfn.hpp"
#include "pam/stats.hpp"

namespace pam {

InitialCondition InitialCondition::gaussian_bump(double w) {
  if (!(w > 0.0)) throw std::domain_error("gaussian_bump: width must be positive");
  return {Kind::GaussianBump, w};
}

double InitialCondition::value(std::span<const double> x) const {
  switch (kind) {
    case Kind::ConstantOne:
      return 1.0;
    case Kind::GaussianBump:
      return heat_kernel(width, x);
    case Kind::PointMass:
      throw std::domain_error("InitialCondition: point mass has no pointwise value");
  }
  return 0.0;
}

double InitialCondition::heat_evolution(double t, std::span<const double> x) const {
  switch (kind) {
    case Kind::ConstantOne:
      return 1.0;
    case Kind::GaussianBump:
      return heat_kernel(t + width, x);
    case Kind::PointMass:
      return heat_kernel(t, x);
  }
  return 0.0;
}

double InitialCondition::fourier_abs(double xi_norm2) const {
  switch (kind) {
    case Kind::ConstantOne:
      throw std::domain_error("InitialCondition: constant has an atomic spectrum");
    case Kind::GaussianBump:
      return std::exp(-0.5 * width * xi_norm2);
    case Kind::PointMass:
      return 1.0;
  }
  return 0.0;
}

double chaos_kernel_eval(int n, std::span<const double> times,
                         std::span<const double> points, double t,
                         std::span<const double> x, const InitialCondition& u0, int d) {
  if (n < 1) throw std::invalid_argument("chaos_kernel_eval: n must be >= 1");
  if (static_cast<int>(times.size()) != n || static_cast<int>(points.size()) != n * d ||
      static_cast<int>(x.size()) != d)
    throw std::invalid_argument("chaos_kernel_eval: size mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(times[i] > 0.0 && times[i] < t))
      throw std::domain_error("chaos_kernel_eval: times must lie in (0, t)");
    for (int j = i + 1; j < n; ++j)
      if (times[i] == times[j])
        throw std::domain_error("chaos_kernel_eval: coincident times (degenerate input)");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return times[a] < times[b]; });

  std::vector<double> diff(d);
  double value = 1.0;
  // Top link: p_{t - s_(n)}(x - x_(n)).
  {
    const int top = order[n - 1];
    for (int k = 0; k < d; ++k) diff[k] = x[k] - points[top * d + k];
    value *= heat_kernel(t - times[top], diff);
  }
  for (int i = n - 1; i >= 1; --i) {
    const int hi = order[i], lo = order[i - 1];
    for (int k = 0; k < d; ++k) diff[k] = points[hi * d + k] - points[lo * d + k];
    value *= heat_kernel(times[hi] - times[lo], diff);
  }
  {
    const int first = order[0];
    std::span<const double> x1{points.data() + first * d, static_cast<std::size_t>(d)};
    value *= u0.heat_evolution(times[first], x1);
  }
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  return value / nfact;
}

namespace {

double mu_product(const NoiseSpec& spec, std::span<const double> xi_flat, int n, int d) {
  double v = 1.0;
  for (int i = 0; i < n; ++i) {
    if (spec.regime == SpaceRegime::I) {
      double m = spec.amplitude;
      for (int k = 0; k < d; ++k) {
        const double a = spec.alphas[k];
        if (a == 0.0) continue;
        const double ax = std::abs(xi_flat[i * d + k]);
        if (ax < 1e-300) return 0.0;
        m *= std::pow(ax, a);
      }
      v *= m;
    } else {
      const double ax = std::abs(xi_flat[i]);
      v *= spec.amplitude * std::pow(ax, spec.alpha_ii);
    }
  }
  return v;
}

struct SampleAccumulator {
  double sum = 0.0;
  double sum2 = 0.0;
  void add(double w) {
    sum += w;
    sum2 += w * w;
  }
};

// White-in-time estimator: one ordered time block, Gaussian frequency
// proposals, spectral weights as importance ratios.
void white_chaos_samples(int n, double t, const NoiseSpec& spec,
                         const InitialCondition& u0, double x, std::size_t samples,
                         Rng& rng, SampleAccumulator& acc) {
  const int d = spec.dim();
  const bool bump = u0.kind == InitialCondition::Kind::GaussianBump;
  double simplex_vol = 1.0;
  for (int i = 1; i <= n; ++i) simplex_vol *= t / i;

  std::vector<double> s(n), gaps(n), y(n * d), xi(n * d);
  std::vector<double> zeta(d), zetap(d), nu(d), delta(d);
  const double log_pi = std::log(M_PI);

  for (std::size_t it = 0; it < samples; ++it) {
    for (int i = 0; i < n; ++i) s[i] = rng.uniform(0.0, t);
    std::sort(s.begin(), s.end());
    bool degenerate = false;
    for (int i = 0; i < n; ++i) {
      const double hi = (i + 1 < n) ? s[i + 1] : t;
      gaps[i] = hi - s[i];
      if (!(gaps[i] > 0.0)) degenerate = true;
    }
    if (degenerate) {
      acc.add(0.0);
      continue;
    }

    double log_w = std::log(simplex_vol);
    double cos_factor = 1.0;
    double delta_norm2 = 0.0;
    std::fill(nu.begin(), nu.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    if (bump) {
      const double prec = s[0] + u0.width;
      const double sd = 1.0 / std::sqrt(prec);
      for (int k = 0; k < d; ++k) {
        zeta[k] = sd * rng.normal();
        zetap[k] = sd * rng.normal();
        nu[k] = 0.5 * (zeta[k] + zetap[k]);
        delta[k] = zeta[k] - zetap[k];
        delta_norm2 += delta[k] * delta[k];
      }
      // u0_hat and heat factors against the two zeta proposals.
      log_w += d * std::log(2.0 * M_PI / prec) - 2.0 * d * std::log(2.0 * M_PI);
      log_w += -0.25 * delta_norm2 * (t - s[0]);
      cos_factor = std::cos(x * delta[0]);  // evaluation point on axis 0
    }

    for (int i = 0; i < n; ++i) {
      const double sd = 1.0 / std::sqrt(2.0 * gaps[i]);
      for (int k = 0; k < d; ++k) y[i * d + k] = sd * rng.normal();
      log_w += 0.5 * d * (log_pi - std::log(gaps[i]));
    }
    // xi_(i) from successive partial sums (partial_i = y_i + nu).
    for (int k = 0; k < d; ++k) xi[k] = y[k] + nu[k];
    for (int i = 1; i < n; ++i)
      for (int k = 0; k < d; ++k) xi[i * d + k] = y[i * d + k] - y[(i - 1) * d + k];

    const double mu = mu_product(spec, xi, n, d);
    acc.add(std::exp(log_w) * cos_factor * mu);
  }
}

// Riesz-in-time estimator over [0,t]^{2n} coordinate pairs.
void riesz_chaos_samples(int n, double t, const NoiseSpec& spec,
                         const InitialCondition& u0, double x, std::size_t samples,
                         Rng& rng, SampleAccumulator& acc) {
  const int d = spec.dim();
  const bool bump = u0.kind == InitialCondition::Kind::GaussianBump;
  const double a0 = spec.alpha0;

  std::vector<double> s(n), sp(n), y(n * d), xi(n * d), partial(d);
  std::vector<int> order(n), orderp(n);
  std::vector<double> zeta(d, 0.0), zetap(d, 0.0);
  double log_nfact = 0.0;
  for (int i = 2; i <= n; ++i) log_nfact += std::log(static_cast<double>(i));

  for (std::size_t it = 0; it < samples; ++it) {
    double log_w = -log_nfact;
    bool degenerate = false;
    for (int i = 0; i < n; ++i) {
      const double g = t * std::pow(rng.uniform(), 1.0 / (1.0 - a0));
      const double a = rng.uniform(0.0, t - g);
      if (rng.uniform() < 0.5) {
        s[i] = a + g;
        sp[i] = a;
      } else {
        s[i] = a;
        sp[i] = a + g;
      }
      if (!(g > 0.0) || !(g < t)) degenerate = true;
      log_w += std::log(2.0 * std::pow(t, 1.0 - a0) * (t - g) / (1.0 - a0));
    }
    if (degenerate) {
      acc.add(0.0);
      continue;
    }

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return s[a] < s[b]; });
    std::iota(orderp.begin(), orderp.end(), 0);
    std::sort(orderp.begin(), orderp.end(), [&](int a, int b) { return sp[a] < sp[b]; });

    double cos_arg = 0.0;
    if (bump) {
      const double prec = s[order[0]] + u0.width;
      const double precp = sp[orderp[0]] + u0.width;
      for (int k = 0; k < d; ++k) {
        zeta[k] = rng.normal() / std::sqrt(prec);
        zetap[k] = rng.normal() / std::sqrt(precp);
      }
      log_w += 0.5 * d * (std::log(2.0 * M_PI / prec) + std::log(2.0 * M_PI / precp)) -
               2.0 * d * std::log(2.0 * M_PI);
      cos_arg = x * (zeta[0] - zetap[0]);
    }

    // Unprimed side: Gaussian proposals on partial sums, exact cancellation.
    for (int i = 0; i < n; ++i) {
      const double hi = (i + 1 < n) ? s[order[i + 1]] : t;
      const double gap = hi - s[order[i]];
      if (!(gap > 0.0)) {
        degenerate = true;
        break;
      }
      const double sd = 1.0 / std::sqrt(gap);
      for (int k = 0; k < d; ++k) y[i * d + k] = sd * rng.normal();
      log_w += 0.5 * d * std::log(2.0 * M_PI / gap);
    }
    if (degenerate) {
      acc.add(0.0);
      continue;
    }
    // xi in original labels: xi_{order[i]} = partial_i - partial_{i-1},
    // partial_i = y_i + zeta.
    for (int k = 0; k < d; ++k) xi[order[0] * d + k] = y[k] + zeta[k];
    for (int i = 1; i < n; ++i)
      for (int k = 0; k < d; ++k)
        xi[order[i] * d + k] = y[i * d + k] - y[(i - 1) * d + k];

    // Primed side evaluated explicitly (bounded by 1).
    double primed_exponent = 0.0;
    std::fill(partial.begin(), partial.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const int lab = orderp[i];
      double norm2 = 0.0;
      for (int k = 0; k < d; ++k) {
        partial[k] += xi[lab * d + k];
        const double c = partial[k] - zetap[k];
        norm2 += c * c;
      }
      const double hi = (i + 1 < n) ? sp[orderp[i + 1]] : t;
      primed_exponent += -0.5 * (hi - sp[lab]) * norm2;
    }

    const double mu = mu_product(spec, xi, n, d);
    acc.add(std::exp(log_w + primed_exponent) * std::cos(cos_arg) * mu);
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

ChaosEstimate chaos_variance(int n, double t, const NoiseSpec& spec,
                             const InitialCondition& u0, McParams mc, double x) {
  spec.validate_hypothesis();
  if (n < 1 || n > 6)
    throw std::invalid_argument("chaos_variance: level n must lie in [1, 6]");
  if (!(t > 0.0)) throw std::domain_error("chaos_variance: t must be positive");
  if (u0.kind == InitialCondition::Kind::PointMass)
    throw std::invalid_argument("chaos_variance: u0 must be constant_one or gaussian_bump");
  if (mc.samples < 1000)
    throw std::invalid_argument("chaos_variance: need at least 1e3 samples");

  Rng rng(mc.seed);
  SampleAccumulator acc;
  if (spec.time_mode == TimeMode::White)
    white_chaos_samples(n, t, spec, u0, x, mc.samples, rng, acc);
  else
    riesz_chaos_samples(n, t, spec, u0, x, mc.samples, rng, acc);

  const double N = static_cast<double>(mc.samples);
  const double mean = acc.sum / N;
  const double var = std::max(0.0, (acc.sum2 / N - mean * mean) * N / (N - 1.0));
  ChaosEstimate est;
  est.n = n;
  est.t = t;
  est.x = x;
  est.variance = mean;
  est.std_error = std::sqrt(var / N);
  est.samples = mc.samples;
  est.seed = mc.seed;
  est.high_error = est.variance != 0.0 && est.std_error > 0.1 * std::abs(est.variance);
  est.bound_value = chaos_variance_bound(n, t, spec);
  return est;
}

double chaos_variance_bound(int n, double t, const NoiseSpec& spec, double c, double a2) {
  if (n < 0) throw std::invalid_argument("chaos_variance_bound: n must be >= 0");
  if (!(t > 0.0)) throw std::domain_error("chaos_variance_bound: t must be positive");
  const double a0 = spec.effective_alpha0();
  const double alpha = spec.alpha_sum();
  double fact_pow, time_pow;
  if (spec.regime == SpaceRegime::II) {
    if (alpha >= 1.0)
      throw std::domain_error("chaos_variance_bound: regime ii bound needs alpha < 1");
    fact_pow = -0.5 * (1.0 - alpha);
    time_pow = 0.5 * (3.0 - 2.0 * a0 - alpha) * n;
  } else {
    fact_pow = 0.5 * alpha - 1.0;
    time_pow = 0.5 * (4.0 - 2.0 * a0 - alpha) * n;
  }
  return std::pow(c, n) * std::pow(t, a2) * std::pow(factorial(n), fact_pow) *
         std::pow(t, time_pow);
}

SecondMomentSeries second_moment_series(double t, const NoiseSpec& spec,
                                        const InitialCondition& u0, int N, McParams mc,
                                        double x, double c_override) {
  if (N < 0 || N > 6)
    throw std::invalid_argument("second_moment_series: truncation N must lie in [0, 6]");
  SecondMomentSeries out;
  std::vector<double> pt(spec.dim(), 0.0);
  pt[0] = x;
  const double m0 = u0.heat_evolution(t, pt);
  out.value = m0 * m0;
  for (int n = 1; n <= N; ++n) {
    McParams level = mc;
    level.seed = mc.seed + static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ULL;
    out.terms.push_back(chaos_variance(n, t, spec, u0, level, x));
    out.value += out.terms.back().variance;
  }
  // Fit the bound constant to the computed terms, then sum the bound tail.
  double c = c_override;
  if (!(c > 0.0)) {
    c = 0.0;
    for (const ChaosEstimate& e : out.terms) {
      const double base = chaos_variance_bound(e.n, t, spec, 1.0);
      if (base > 0.0 && e.variance > 0.0)
        c = std::max(c, std::pow(e.variance / base, 1.0 / e.n));
    }
    if (c == 0.0) c = 1.0;
  }
  out.fitted_c = c;
  double tail = 0.0;
  for (int n = N + 1; n <= N + 400; ++n) {
    const double b = chaos_variance_bound(n, t, spec, c);
    tail += b;
    if (b < 1e-16 * std::max(out.value, 1.0) && n > N + 5) break;
  }
  out.tail_bound = tail;
  return out;
}

double moment_bound(double p, double t, const NoiseSpec& spec, double C, double c) {
  if (!(p >= 2.0)) throw std::domain_error("moment_bound: p must be >= 2");
  if (!(t > 0.0)) throw std::domain_error("moment_bound: t must be positive");
  const double a0 = spec.effective_alpha0();
  const double alpha = spec.alpha_sum();
  double p_expo, t_expo;
  if (spec.regime == SpaceRegime::II) {
    if (alpha >= 1.0) throw std::domain_error("moment_bound: regime ii needs alpha < 1");
    p_expo = (3.0 - alpha) / (1.0 - alpha);
    t_expo = (3.0 - 2.0 * a0 - alpha) / (1.0 - alpha);
  } else {
    p_expo = (4.0 - alpha) / (2.0 - alpha);
    t_expo = (4.0 - 2.0 * a0 - alpha) / (2.0 - alpha);
  }
  return C * std::exp(c * std::pow(p, p_expo) * std::pow(t, t_expo));
}

BetaFit beta_fit(const InitialCondition& u0, const NoiseSpec& spec,
                 std::span<const double> s_grid) {
  if (s_grid.size() < 4)
    throw std::invalid_argument("beta_fit: need at least 4 grid points");
  const auto [mn, mx] = std::minmax_element(s_grid.begin(), s_grid.end());
  if (!(*mn > 0.0) || *mx > 1.0 || *mx / *mn < 1e3)
    throw std::invalid_argument("beta_fit: s grid must span >= 3 decades below 1");
  const double a0 = spec.effective_alpha0();
  const double alpha = spec.alpha_sum();

  if (u0.kind == InitialCondition::Kind::ConstantOne) {
    // Atomic spectrum at xi = 0: the integral is constant in s.
    if (alpha < 0.0)
      throw std::domain_error("beta_fit: |xi|^{alpha/2} diverges on an atom at 0");
    BetaFit out;
    out.beta = 0.0;
    out.r2 = 1.0;
    out.admissible = out.beta < 1.0 - 0.5 * a0;
    return out;
  }

  const int d = spec.dim();
  // The integrand decays like exp(-(s + w/2) xi^2) for a bump of width w;
  // size the quadrature domain by the effective decay rate.
  const double decay0 =
      u0.kind == InitialCondition::Kind::GaussianBump ? 0.5 * u0.width : 0.0;
  std::vector<double> logs, logI;
  for (double s : s_grid) {
    double I = 0.0;
    const double radius = 14.0 / std::sqrt(s + decay0);
    if (d == 1) {
      I += integrate(
          [&](double xi) { return std::exp(-s * xi * xi) * u0.fourier_abs(xi * xi); },
          -radius, radius, 48, 48);
      const double half = 0.5 * alpha;
      const WeightedNodes nodes = power_weighted_nodes(half, -radius, radius, 32, 48);
      for (std::size_t i = 0; i < nodes.x.size(); ++i) {
        const double xi2 = nodes.x[i] * nodes.x[i];
        I += nodes.w[i] * std::exp(-s * xi2) * u0.fourier_abs(xi2);
      }
    } else {
      I = integrate(
          [&](double r) {
            const double bracket = 1.0 + std::pow(r, 0.5 * alpha);
            return 2.0 * M_PI * r * bracket * std::exp(-s * r * r) * u0.fourier_abs(r * r);
          },
          0.0, radius, 48, 48);
    }
    if (!(I > 0.0) || !std::isfinite(I))
      throw std::domain_error("beta_fit: non-integrable initial spectrum");
    logs.push_back(std::log(s));
    logI.push_back(std::log(I));
  }
  const LineFit fit = fit_line(logs, logI);
  BetaFit out;
  out.beta = -fit.slope;
  out.r2 = fit.r2;
  out.admissible = out.beta < 1.0 - 0.5 * a0;
  return out;
}

}  // namespace pam
