#ifndef PAM_HOLDER_HPP
#define PAM_HOLDER_HPP

#include <span>
#include <vector>

#include "pam/grid.hpp"
#include "pam/noise_spec.hpp"
#include "pam/solver.hpp"

namespace pam {

enum class IncrementMode { Rectangular, TimeMarginal, SpaceMarginal };

struct LagSpec {
  std::vector<double> dt_lags;
  std::vector<double> dx_lags;
};

struct IncrementRow {
  double dt_lag = 0.0;
  double dx_lag = 0.0;
  int p = 2;
  double estimate = 0.0;
  double std_error = 0.0;
};

struct IncrementTable {
  IncrementMode mode = IncrementMode::Rectangular;
  int p = 2;
  int replicas = 0;
  std::vector<IncrementRow> rows;
};

// Streaming accumulator over replicas: feed one replica's snapshot block at
// a time, jackknife over replicas at the end. Spatial averaging is
// restricted to the central window of width L/2 (periodicity guard), so no
// increment ever wraps around the torus.
class IncrementAccumulator {
 public:
  // win_lo/win_hi override the averaging window (index units, hi exclusive);
  // -1 keeps the default central window [N/4, 3N/4).
  IncrementAccumulator(const GridSpec& grid, std::span<const double> snapshot_times,
                       const LagSpec& lags, IncrementMode mode, int p,
                       int win_lo = -1, int win_hi = -1);

  void consume(std::span<const double> replica_fields);  // snapshots x N
  IncrementTable finalize() const;

 private:
  GridSpec grid_;
  std::vector<double> snapshot_times_;
  IncrementMode mode_;
  int p_;
  int win_lo_ = 0;
  int win_hi_ = 0;
  struct Lag {
    int dt_idx;
    int dx_idx;
    double dt;
    double dx;
  };
  std::vector<Lag> lags_;
  std::vector<std::vector<double>> replica_means_;  // per lag, per replica
};

// Ensemble-and-translation averaged absolute moments of rectangular
// (double-difference) or marginal increments (d = 1 ensembles).
IncrementTable increment_moments(const FieldEnsemble& ens, const LagSpec& lags,
                                 IncrementMode mode, int p);

struct HolderFit {
  double alpha0_hat = 0.0;
  double alpha_hat = 0.0;
  double ci0 = 0.0;  // confidence half-widths
  double ci = 0.0;
  double r2 = 0.0;
  int p = 2;
  bool valid = false;  // r2 > 0.98 and positive ci
  std::vector<double> dt_lags_used;
  std::vector<double> dx_lags_used;
};

// Least squares of log-moment against log-lags; slopes divided by p.
// Rectangular tables fit both exponents jointly; marginal tables fit one
// (the other reported as NaN). Requires >= 4 lags per fitted axis spanning
// at least one decade.
HolderFit fit_exponents(const IncrementTable& table);

// Admissible joint exponent region: 2 a0bar + abar < B.
struct AdmissibleRegion {
  double B = 0.0;
  // Space-time white is scored with the flat-spectrum convention
  // alpha0 = alpha = 1 in the regime-i formula, giving B = 1/2.
  bool white_convention = false;
  bool contains(double a0bar, double abar) const { return 2.0 * a0bar + abar < B; }
};
AdmissibleRegion predicted_region(const NoiseSpec& spec);

// Per-chaos-level rectangular increment bound
//   c^n (n!)^{alpha/2-1} |t-r|^{2 a0bar} |x-y|^{2 abar} t^{(4-2a0-alpha)n/2}
// (regime i; regime ii uses (n!)^{(alpha-1)/2} and t^{(3-2a0-alpha)n/2}).
// The exponent pair must lie inside the plain admissible region for the
// spec's stored exponents.
double chaos_increment_bound(int n, double t, double r, double x, double y,
                             const NoiseSpec& spec, double a0bar, double abar,
                             double c = 1.0);

}  // namespace pam

#endif
