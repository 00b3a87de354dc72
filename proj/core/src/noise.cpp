#include "pam/noise.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fft.hpp"
#include "pam/quadrature.hpp"
#include "pam/specfn.hpp"

namespace pam {

double spectral_density(const NoiseSpec& spec, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != spec.dim())
    throw std::invalid_argument("spectral_density: dimension mismatch");
  if (spec.regime == SpaceRegime::I) {
    double v = spec.amplitude;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const double a = spec.alphas[i];
      if (a == 0.0) continue;
      const double ax = std::abs(xi[i]);
      if (ax == 0.0) return std::numeric_limits<double>::infinity();
      v *= std::pow(ax, a);
    }
    return v;
  }
  return spec.amplitude * std::pow(std::abs(xi[0]), spec.alpha_ii);
}

TimeCovariance time_covariance(const NoiseSpec& spec, double tau) {
  if (spec.time_mode == TimeMode::White) return {0.0, true};
  if (tau == 0.0)
    throw std::domain_error("time_covariance: riesz kernel is singular at tau = 0");
  return {std::pow(std::abs(tau), -spec.alpha0), false};
}

namespace {

// int_0^A int_0^B |s-t|^{-a0} ds dt via the even double primitive
// K(tau) = |tau|^{2-a0} / ((1-a0)(2-a0)).
double riesz_time_factor(double a0, double A, double B) {
  auto K = [a0](double tau) {
    return std::pow(std::abs(tau), 2.0 - a0) / ((1.0 - a0) * (2.0 - a0));
  };
  return K(A) + K(B) - K(A - B);
}

double time_factor(const NoiseSpec& spec, double A, double B) {
  if (spec.time_mode == TimeMode::White) return std::min(A, B);
  return riesz_time_factor(spec.alpha0, A, B);
}

// int_R exp(-w xi^2) |xi|^a dxi = Gamma((a+1)/2) w^{-(a+1)/2}.
double gaussian_power_integral(double w, double a) {
  return std::tgamma(0.5 * (a + 1.0)) * std::pow(w, -0.5 * (a + 1.0));
}

}  // namespace

double analytic_test_variance(const NoiseSpec& spec, double horizon, double width) {
  if (!(horizon > 0.0)) throw std::domain_error("analytic_test_variance: horizon must be positive");
  if (!(width > 0.0)) throw std::domain_error("analytic_test_variance: width must be positive");
  double space = spec.amplitude;
  if (spec.regime == SpaceRegime::I) {
    for (double a : spec.alphas) space *= gaussian_power_integral(width, a);
  } else {
    space *= gaussian_power_integral(width, spec.alpha_ii);
  }
  return time_factor(spec, horizon, horizon) * space;
}

double analytic_probe_covariance(const NoiseSpec& spec, const GaussianProbe& a,
                                 const GaussianProbe& b) {
  const int d = spec.dim();
  auto center = [d](const GaussianProbe& p, int axis) {
    return p.center.empty() ? 0.0 : p.center[axis];
  };
  const double w = 0.5 * (a.width + b.width);
  double space = spec.amplitude;
  for (int axis = 0; axis < d; ++axis) {
    const double sep = center(a, axis) - center(b, axis);
    const double expo = spec.regime == SpaceRegime::I ? spec.alphas[axis] : spec.alpha_ii;
    const double radius = 12.0 / std::sqrt(w);
    double axis_val = 0.0;
    if (expo == 0.0) {
      axis_val = integrate(
          [&](double xi) { return std::exp(-w * xi * xi) * std::cos(xi * sep); }, -radius,
          radius, 32, 48);
    } else {
      const WeightedNodes nodes = power_weighted_nodes(expo, -radius, radius, 24, 48);
      for (std::size_t i = 0; i < nodes.x.size(); ++i)
        axis_val += nodes.w[i] * std::exp(-w * nodes.x[i] * nodes.x[i]) *
                    std::cos(nodes.x[i] * sep);
    }
    space *= axis_val;
  }
  return time_factor(spec, a.horizon, b.horizon) * space;
}

// ---------------------------------------------------------------------------
// Spectral synthesis

struct SpatialSynthesizer::Impl {
  GridSpec grid;
  int d = 1;
  int n = 0;
  int spectral = 0;
  // Per stored half-spectrum cell: standard deviation of the coefficient,
  // cell kind, and mirror source for Hermitian-constrained cells.
  enum Kind : unsigned char { SelfReal = 0, Complex = 1, Mirror = 2 };
  std::vector<double> sigma;
  std::vector<unsigned char> kind;
  std::vector<int> mirror;
  double weight_sum = 0.0;
  RealFft fft;
  std::vector<std::complex<double>> coeffs;

  Impl(const NoiseSpec& spec, const GridSpec& g)
      : grid(g), d(g.d), n(g.N), fft(g.d, g.N) {
    spectral = fft.spectral_size();
    sigma.assign(spectral, 0.0);
    kind.assign(spectral, Complex);
    mirror.assign(spectral, -1);
    coeffs.resize(spectral);

    const double h = 2.0 * M_PI / g.L;
    // Exact cell mass of |v|^e over [xi - h/2, xi + h/2]; the flat case
    // reduces to h itself.
    auto cell_mass = [h](double e, double xi) {
      auto F = [e](double v) {
        const double av = std::abs(v);
        return (v < 0.0 ? -1.0 : 1.0) * std::pow(av, e + 1.0) / (e + 1.0);
      };
      if (e == 0.0) return h;
      return F(xi + 0.5 * h) - F(xi - 0.5 * h);
    };
    auto axis_exponent = [&](int axis) {
      return spec.regime == SpaceRegime::I ? spec.alphas[axis] : spec.alpha_ii;
    };
    auto signed_freq = [this](int k) { return k <= n / 2 ? k : k - n; };

    if (d == 1) {
      for (int k = 0; k <= n / 2; ++k) {
        const double xi = h * k;
        const double w = spec.amplitude * cell_mass(axis_exponent(0), k == n / 2 ? -xi : xi);
        sigma[k] = std::sqrt(std::max(w, 0.0));
        const bool self = (k == 0 || k == n / 2);
        kind[k] = self ? SelfReal : Complex;
        weight_sum += self ? w : 2.0 * w;
      }
    } else {
      const int cols = n / 2 + 1;
      for (int k0 = 0; k0 < n; ++k0) {
        for (int k1 = 0; k1 < cols; ++k1) {
          const int idx = k0 * cols + k1;
          const int f0 = signed_freq(k0);
          const int f1 = k1;  // stored columns are already 0..n/2
          const double w = spec.amplitude * cell_mass(axis_exponent(0), h * f0) *
                           cell_mass(axis_exponent(1), h * (k1 == n / 2 ? -f1 : f1));
          sigma[idx] = std::sqrt(std::max(w, 0.0));
          const bool edge_col = (k1 == 0 || k1 == n / 2);
          const bool self_row = (k0 == 0 || k0 == n / 2);
          if (edge_col && self_row) {
            kind[idx] = SelfReal;
            weight_sum += w;
          } else if (edge_col && k0 > n / 2) {
            kind[idx] = Mirror;  // conjugate of (n - k0, k1)
            mirror[idx] = (n - k0) * cols + k1;
          } else {
            kind[idx] = Complex;
            weight_sum += 2.0 * w;
          }
        }
      }
    }
  }
};

SpatialSynthesizer::SpatialSynthesizer(const NoiseSpec& spec, const GridSpec& grid) {
  grid.validate();
  spec.validate();
  if (spec.regime == SpaceRegime::II && grid.d != 1)
    throw std::invalid_argument("SpatialSynthesizer: regime ii requires d = 1");
  if (spec.regime == SpaceRegime::I && static_cast<int>(spec.alphas.size()) != grid.d)
    throw std::invalid_argument("SpatialSynthesizer: spec/grid dimension mismatch");
  impl_ = std::make_unique<Impl>(spec, grid);
}

SpatialSynthesizer::~SpatialSynthesizer() = default;
SpatialSynthesizer::SpatialSynthesizer(SpatialSynthesizer&&) noexcept = default;
SpatialSynthesizer& SpatialSynthesizer::operator=(SpatialSynthesizer&&) noexcept = default;

void SpatialSynthesizer::sample(Rng& rng, std::span<double> out) {
  Impl& im = *impl_;
  if (static_cast<int>(out.size()) != im.fft.real_size())
    throw std::invalid_argument("SpatialSynthesizer::sample: output size mismatch");
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  for (int i = 0; i < im.spectral; ++i) {
    switch (im.kind[i]) {
      case Impl::SelfReal:
        im.coeffs[i] = {im.sigma[i] * rng.normal(), 0.0};
        break;
      case Impl::Complex: {
        const double g = rng.normal();
        const double hq = rng.normal();
        im.coeffs[i] = {im.sigma[i] * inv_sqrt2 * g, im.sigma[i] * inv_sqrt2 * hq};
        break;
      }
      case Impl::Mirror:
        im.coeffs[i] = std::conj(im.coeffs[im.mirror[i]]);
        break;
    }
  }
  im.fft.inverse(im.coeffs.data(), out.data());
}

double SpatialSynthesizer::weight_sum() const { return impl_->weight_sum; }

// ---------------------------------------------------------------------------

std::vector<double> temporal_cell_covariance(const NoiseSpec& spec, const GridSpec& grid) {
  const int m = grid.steps();
  std::vector<double> cov(static_cast<std::size_t>(m) * m, 0.0);
  if (spec.time_mode == TimeMode::White) {
    for (int j = 0; j < m; ++j) cov[static_cast<std::size_t>(j) * m + j] = grid.dt;
    return cov;
  }
  const double a0 = spec.alpha0;
  auto K = [a0](double tau) {
    return std::pow(std::abs(tau), 2.0 - a0) / ((1.0 - a0) * (2.0 - a0));
  };
  const double dt = grid.dt;
  // Integral over [j dt,(j+1) dt] x [k dt,(k+1) dt] depends on j - k only.
  std::vector<double> by_gap(m);
  for (int g = 0; g < m; ++g) {
    const double tau = g * dt;
    by_gap[g] = K(tau + dt) - 2.0 * K(tau) + K(tau - dt);
  }
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      cov[static_cast<std::size_t>(j) * m + k] = by_gap[std::abs(j - k)];
  return cov;
}

struct NoisePathSampler::Impl {
  NoiseSpec spec;
  GridSpec grid;
  SpatialSynthesizer synth;
  Eigen::MatrixXd time_sqrt;  // empty for white time
  Eigen::MatrixXd scratch;

  Impl(const NoiseSpec& sp, const GridSpec& g) : spec(sp), grid(g), synth(sp, g) {}
};

NoisePathSampler::NoisePathSampler(const NoiseSpec& spec, const GridSpec& grid) {
  grid.validate();
  spec.validate();
  const int steps = grid.steps();
  if (spec.time_mode == TimeMode::Riesz && steps > 4096)
    throw std::runtime_error(
        "sample_noise_path: riesz temporal factorization capped at 4096 steps");
  impl_ = std::make_unique<Impl>(spec, grid);
  if (spec.time_mode == TimeMode::Riesz) {
    // Symmetric square root of the cell covariance; dense factorization is
    // cheap at desk-scale step counts and exact.
    const std::vector<double> cov = temporal_cell_covariance(spec, grid);
    Eigen::Map<const Eigen::MatrixXd> C(cov.data(), steps, steps);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("sample_noise_path: temporal factorization failed");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    impl_->time_sqrt =
        es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    impl_->scratch.resize(steps, grid.points());
  }
}

NoisePathSampler::~NoisePathSampler() = default;
NoisePathSampler::NoisePathSampler(NoisePathSampler&&) noexcept = default;

NoisePath NoisePathSampler::sample(std::uint64_t seed) {
  Impl& im = *impl_;
  const int steps = im.grid.steps();
  const int points = im.grid.points();
  NoisePath path{im.spec, im.grid, seed, {}};
  path.increments.resize(static_cast<std::size_t>(steps) * points);
  Rng rng(seed);

  if (im.spec.time_mode == TimeMode::White) {
    const double scale = std::sqrt(im.grid.dt);
    for (int k = 0; k < steps; ++k) {
      std::span<double> row{path.increments.data() + static_cast<std::size_t>(k) * points,
                            static_cast<std::size_t>(points)};
      im.synth.sample(rng, row);
      for (double& v : row) v *= scale;
    }
    return path;
  }

  std::vector<double> row(points);
  for (int k = 0; k < steps; ++k) {
    im.synth.sample(rng, row);
    for (int j = 0; j < points; ++j) im.scratch(k, j) = row[j];
  }
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> out(
      path.increments.data(), steps, points);
  out = im.time_sqrt * im.scratch;
  return path;
}

NoisePath sample_noise_path(const NoiseSpec& spec, const GridSpec& grid,
                            std::uint64_t seed) {
  NoisePathSampler sampler(spec, grid);
  return sampler.sample(seed);
}

double probe_pairing(const NoisePath& path, const GaussianProbe& probe) {
  const GridSpec& grid = path.grid;
  const int steps = grid.steps();
  const int points = grid.points();
  const double ratio = probe.horizon / grid.dt;
  if (std::abs(ratio - std::llround(ratio)) > 1e-9)
    throw std::invalid_argument("probe_pairing: horizon must be a multiple of dt");
  const int active = std::min<long long>(steps, std::llround(ratio));

  auto center = [&](int axis) { return probe.center.empty() ? 0.0 : probe.center[axis]; };
  const std::vector<double> xs = grid.axis_coords();
  std::vector<double> g(points);
  if (grid.d == 1) {
    for (int j = 0; j < grid.N; ++j) g[j] = heat_kernel1(probe.width, xs[j] - center(0));
  } else {
    for (int j0 = 0; j0 < grid.N; ++j0)
      for (int j1 = 0; j1 < grid.N; ++j1)
        g[j0 * grid.N + j1] = heat_kernel1(probe.width, xs[j0] - center(0)) *
                              heat_kernel1(probe.width, xs[j1] - center(1));
  }
  double cell = 1.0;
  for (int i = 0; i < grid.d; ++i) cell *= grid.dx();

  double acc = 0.0;
  for (int k = 0; k < active; ++k) {
    const std::span<const double> row = path.slice(k);
    double s = 0.0;
    for (int j = 0; j < points; ++j) s += row[j] * g[j];
    acc += s;
  }
  return acc * cell;
}

CovarianceMatrix empirical_covariance(std::span<const NoisePath> paths,
                                      std::span<const GaussianProbe> probes) {
  const int R = static_cast<int>(paths.size());
  const int P = static_cast<int>(probes.size());
  if (R < 2) throw std::invalid_argument("empirical_covariance: need at least 2 replicas");
  std::vector<std::vector<double>> vals(P, std::vector<double>(R));
  for (int p = 0; p < P; ++p)
    for (int r = 0; r < R; ++r) vals[p][r] = probe_pairing(paths[r], probes[p]);
  CovarianceMatrix out;
  out.n = P;
  out.entries.resize(static_cast<std::size_t>(P) * P);
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j)
      out.entries[static_cast<std::size_t>(i) * P + j] =
          covariance_with_jackknife(vals[i], vals[j]);
  return out;
}

}  // namespace pam
