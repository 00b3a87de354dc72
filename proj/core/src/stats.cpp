#include "pam/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace pam {

MeanStdErr mean_and_stderr(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("mean_and_stderr: empty sample");
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(n);
  if (n == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

VarianceEstimate variance_with_jackknife(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("variance_with_jackknife: need >= 2 samples");
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);

  // Leave-one-out variances computed from running sums.
  double se2 = 0.0;
  const double nm1 = static_cast<double>(n - 1);
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ssi = ss - (xs[i] - mean) * (xs[i] - mean) * static_cast<double>(n) / nm1;
    loo[i] = ssi / (nm1 - 1.0);
  }
  double lmean = 0.0;
  for (double v : loo) lmean += v;
  lmean /= static_cast<double>(n);
  for (double v : loo) se2 += (v - lmean) * (v - lmean);
  se2 *= nm1 / static_cast<double>(n);
  return {var, std::sqrt(se2)};
}

VarianceEstimate covariance_with_jackknife(std::span<const double> xs,
                                           std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2)
    throw std::invalid_argument("covariance_with_jackknife: need paired samples, n >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxy += (xs[i] - mx) * (ys[i] - my);
  const double cov = sxy / static_cast<double>(n - 1);

  const double nm1 = static_cast<double>(n - 1);
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sxyi = sxy - (xs[i] - mx) * (ys[i] - my) * static_cast<double>(n) / nm1;
    loo[i] = sxyi / (nm1 - 1.0);
  }
  double lmean = 0.0;
  for (double v : loo) lmean += v;
  lmean /= static_cast<double>(n);
  double se2 = 0.0;
  for (double v : loo) se2 += (v - lmean) * (v - lmean);
  se2 *= nm1 / static_cast<double>(n);
  return {cov, std::sqrt(se2)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw std::invalid_argument("fit_line: need >= 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::runtime_error("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double dof = static_cast<double>(n) - 2.0;
  f.slope_std_error = dof > 0.0 ? std::sqrt(sse / dof / sxx) : 0.0;
  return f;
}

PlaneFit fit_plane(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> y) {
  const std::size_t n = x1.size();
  if (n != x2.size() || n != y.size() || n < 4)
    throw std::invalid_argument("fit_plane: need >= 4 points");
  double m1 = 0.0, m2 = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m1 += x1[i];
    m2 += x2[i];
    my += y[i];
  }
  m1 /= static_cast<double>(n);
  m2 /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double s11 = 0.0, s22 = 0.0, s12 = 0.0, s1y = 0.0, s2y = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x1[i] - m1, b = x2[i] - m2, c = y[i] - my;
    s11 += a * a;
    s22 += b * b;
    s12 += a * b;
    s1y += a * c;
    s2y += b * c;
    syy += c * c;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(det > 1e-12 * s11 * s22) || s11 <= 0.0 || s22 <= 0.0)
    throw std::runtime_error("fit_plane: collinear lag design");
  PlaneFit f;
  f.slope1 = (s22 * s1y - s12 * s2y) / det;
  f.slope2 = (s11 * s2y - s12 * s1y) / det;
  f.intercept = my - f.slope1 * m1 - f.slope2 * m2;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope1 * x1[i] + f.slope2 * x2[i]);
    sse += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double dof = static_cast<double>(n) - 3.0;
  const double mse = dof > 0.0 ? sse / dof : 0.0;
  f.slope1_std_error = std::sqrt(mse * s22 / det);
  f.slope2_std_error = std::sqrt(mse * s11 / det);
  return f;
}

}  // namespace pam
