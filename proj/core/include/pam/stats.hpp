#ifndef PAM_STATS_HPP
#define PAM_STATS_HPP

#include <span>
#include <vector>

namespace pam {

struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanStdErr mean_and_stderr(std::span<const double> xs);

// Sample variance (unbiased) of xs with a jackknife standard error for the
// variance estimate itself.
struct VarianceEstimate {
  double variance = 0.0;
  double std_error = 0.0;
};
VarianceEstimate variance_with_jackknife(std::span<const double> xs);

// Covariance of paired samples with jackknife standard error.
VarianceEstimate covariance_with_jackknife(std::span<const double> xs,
                                           std::span<const double> ys);

// Ordinary least squares y = a + b*x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Two-predictor least squares y = a + b1*x1 + b2*x2. Throws
// std::runtime_error on a collinear design.
struct PlaneFit {
  double slope1 = 0.0;
  double slope2 = 0.0;
  double intercept = 0.0;
  double slope1_std_error = 0.0;
  double slope2_std_error = 0.0;
  double r2 = 0.0;
};
PlaneFit fit_plane(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> y);

}  // namespace pam

#endif
