#include "pam/holder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pam/stats.hpp"

namespace pam {

namespace {

int lattice_index(double lag, double unit, const char* what) {
  const double k = lag / unit;
  const long long r = std::llround(k);
  if (r < 0 || std::abs(k - r) > 1e-6 * std::max(1.0, std::abs(k)))
    throw std::invalid_argument(std::string("increment_moments: ") + what +
                                " lag is off the ensemble lattice");
  return static_cast<int>(r);
}

double snapshot_spacing(std::span<const double> times) {
  if (times.size() < 2)
    throw std::invalid_argument("increment_moments: need >= 2 snapshots for time lags");
  const double h = times[1] - times[0];
  for (std::size_t i = 1; i + 1 < times.size(); ++i)
    if (std::abs(times[i + 1] - times[i] - h) > 1e-9 * std::max(1.0, h))
      throw std::invalid_argument("increment_moments: snapshots must be equally spaced");
  return h;
}

}  // namespace

IncrementAccumulator::IncrementAccumulator(const GridSpec& grid,
                                           std::span<const double> snapshot_times,
                                           const LagSpec& lags, IncrementMode mode, int p,
                                           int win_lo, int win_hi)
    : grid_(grid),
      snapshot_times_(snapshot_times.begin(), snapshot_times.end()),
      mode_(mode),
      p_(p),
      win_lo_(win_lo < 0 ? grid.N / 4 : win_lo),
      win_hi_(win_hi < 0 ? 3 * grid.N / 4 : win_hi) {
  if (grid.d != 1)
    throw std::invalid_argument("increment_moments: only d = 1 ensembles are supported");
  if (p != 2 && p != 4)
    throw std::invalid_argument("increment_moments: moment order p must be 2 or 4");
  if (win_lo_ < 0 || win_hi_ <= win_lo_ || win_hi_ > grid.N)
    throw std::invalid_argument("increment_moments: bad averaging window");

  const bool need_dt = mode != IncrementMode::SpaceMarginal;
  const bool need_dx = mode != IncrementMode::TimeMarginal;
  if (need_dt && lags.dt_lags.empty())
    throw std::invalid_argument("increment_moments: no time lags given");
  if (need_dx && lags.dx_lags.empty())
    throw std::invalid_argument("increment_moments: no space lags given");

  const double tstep = need_dt ? snapshot_spacing(snapshot_times_) : 0.0;
  const int snaps = static_cast<int>(snapshot_times_.size());

  auto check_dt = [&](double lag) {
    const int k = lattice_index(lag, tstep, "time");
    if (k < 1 || k >= snaps)
      throw std::invalid_argument("increment_moments: time lag outside snapshot range");
    return k;
  };
  auto check_dx = [&](double lag) {
    const int k = lattice_index(lag, grid_.dx(), "space");
    if (k < 1 || k > grid_.N - win_hi_)
      throw std::invalid_argument(
          "increment_moments: space lag too large for the averaging window");
    return k;
  };

  switch (mode) {
    case IncrementMode::Rectangular:
      for (double dt : lags.dt_lags)
        for (double dx : lags.dx_lags)
          lags_.push_back({check_dt(dt), check_dx(dx), dt, dx});
      break;
    case IncrementMode::TimeMarginal:
      for (double dt : lags.dt_lags) lags_.push_back({check_dt(dt), 0, dt, 0.0});
      break;
    case IncrementMode::SpaceMarginal:
      for (double dx : lags.dx_lags) lags_.push_back({0, check_dx(dx), 0.0, dx});
      break;
  }
  replica_means_.assign(lags_.size(), {});
}

void IncrementAccumulator::consume(std::span<const double> replica_fields) {
  const int snaps = static_cast<int>(snapshot_times_.size());
  const int N = grid_.N;
  if (replica_fields.size() != static_cast<std::size_t>(snaps) * N)
    throw std::invalid_argument("IncrementAccumulator: replica block size mismatch");
  const int win_lo = win_lo_;
  const int win_hi = win_hi_;  // exclusive

  auto u = [&](int s, int j) { return replica_fields[static_cast<std::size_t>(s) * N + j]; };

  for (std::size_t li = 0; li < lags_.size(); ++li) {
    const Lag& lag = lags_[li];
    double acc = 0.0;
    long count = 0;
    switch (mode_) {
      case IncrementMode::Rectangular:
        for (int s = 0; s + lag.dt_idx < snaps; ++s)
          for (int j = win_lo; j < win_hi; ++j) {
            const double D = u(s + lag.dt_idx, j + lag.dx_idx) - u(s, j + lag.dx_idx) -
                             u(s + lag.dt_idx, j) + u(s, j);
            const double D2 = D * D;
            acc += p_ == 2 ? D2 : D2 * D2;
            ++count;
          }
        break;
      case IncrementMode::TimeMarginal:
        for (int s = 0; s + lag.dt_idx < snaps; ++s)
          for (int j = win_lo; j < win_hi; ++j) {
            const double D = u(s + lag.dt_idx, j) - u(s, j);
            const double D2 = D * D;
            acc += p_ == 2 ? D2 : D2 * D2;
            ++count;
          }
        break;
      case IncrementMode::SpaceMarginal:
        for (int s = 0; s < snaps; ++s)
          for (int j = win_lo; j < win_hi; ++j) {
            const double D = u(s, j + lag.dx_idx) - u(s, j);
            const double D2 = D * D;
            acc += p_ == 2 ? D2 : D2 * D2;
            ++count;
          }
        break;
    }
    if (count == 0)
      throw std::invalid_argument("IncrementAccumulator: lag leaves no sample pairs");
    replica_means_[li].push_back(acc / static_cast<double>(count));
  }
}

IncrementTable IncrementAccumulator::finalize() const {
  if (replica_means_.empty() || replica_means_[0].size() < 2)
    throw std::runtime_error("IncrementAccumulator: need at least 2 replicas");
  IncrementTable table;
  table.mode = mode_;
  table.p = p_;
  table.replicas = static_cast<int>(replica_means_[0].size());
  for (std::size_t li = 0; li < lags_.size(); ++li) {
    const MeanStdErr ms = mean_and_stderr(replica_means_[li]);
    table.rows.push_back({lags_[li].dt, lags_[li].dx, p_, ms.mean, ms.std_error});
  }
  return table;
}

IncrementTable increment_moments(const FieldEnsemble& ens, const LagSpec& lags,
                                 IncrementMode mode, int p) {
  if (ens.fields.empty())
    throw std::invalid_argument("increment_moments: ensemble does not store fields");
  IncrementAccumulator acc(ens.config.solve.grid, ens.snapshot_times, lags, mode, p);
  const std::size_t block = ens.snapshot_times.size() * static_cast<std::size_t>(ens.points);
  for (int r = 0; r < ens.config.replicas; ++r)
    acc.consume({ens.fields.data() + block * r, block});
  return acc.finalize();
}

namespace {

void require_lag_design(std::vector<double> lags, const char* axis) {
  std::set<double> distinct(lags.begin(), lags.end());
  if (distinct.size() < 4)
    throw std::invalid_argument(std::string("fit_exponents: need >= 4 distinct ") + axis +
                                " lags");
  const double lo = *distinct.begin();
  const double hi = *distinct.rbegin();
  if (!(hi / lo >= 10.0))
    throw std::invalid_argument(std::string("fit_exponents: ") + axis +
                                " lags must span at least one decade");
}

}  // namespace

HolderFit fit_exponents(const IncrementTable& table) {
  HolderFit fit;
  fit.p = table.p;
  std::vector<double> log_dt, log_dx, log_m;
  for (const IncrementRow& row : table.rows) {
    if (!(row.estimate > 0.0))
      throw std::runtime_error("fit_exponents: non-positive moment estimate");
    if (row.dt_lag > 0.0) log_dt.push_back(std::log(row.dt_lag));
    if (row.dx_lag > 0.0) log_dx.push_back(std::log(row.dx_lag));
    log_m.push_back(std::log(row.estimate));
  }
  const double p = static_cast<double>(table.p);
  const double nan = std::nan("");

  switch (table.mode) {
    case IncrementMode::Rectangular: {
      std::vector<double> dts, dxs;
      for (const IncrementRow& row : table.rows) {
        dts.push_back(row.dt_lag);
        dxs.push_back(row.dx_lag);
      }
      require_lag_design(dts, "time");
      require_lag_design(dxs, "space");
      const PlaneFit pf = fit_plane(log_dt, log_dx, log_m);
      fit.alpha0_hat = pf.slope1 / p;
      fit.alpha_hat = pf.slope2 / p;
      fit.ci0 = 1.96 * pf.slope1_std_error / p;
      fit.ci = 1.96 * pf.slope2_std_error / p;
      fit.r2 = pf.r2;
      fit.dt_lags_used = dts;
      fit.dx_lags_used = dxs;
      break;
    }
    case IncrementMode::TimeMarginal: {
      std::vector<double> dts;
      for (const IncrementRow& row : table.rows) dts.push_back(row.dt_lag);
      require_lag_design(dts, "time");
      const LineFit lf = fit_line(log_dt, log_m);
      fit.alpha0_hat = lf.slope / p;
      fit.alpha_hat = nan;
      fit.ci0 = 1.96 * lf.slope_std_error / p;
      fit.ci = nan;
      fit.r2 = lf.r2;
      fit.dt_lags_used = dts;
      break;
    }
    case IncrementMode::SpaceMarginal: {
      std::vector<double> dxs;
      for (const IncrementRow& row : table.rows) dxs.push_back(row.dx_lag);
      require_lag_design(dxs, "space");
      const LineFit lf = fit_line(log_dx, log_m);
      fit.alpha_hat = lf.slope / p;
      fit.alpha0_hat = nan;
      fit.ci = 1.96 * lf.slope_std_error / p;
      fit.ci0 = nan;
      fit.r2 = lf.r2;
      fit.dx_lags_used = dxs;
      break;
    }
  }
  const double ci_ok = table.mode == IncrementMode::TimeMarginal ? fit.ci0 : fit.ci;
  fit.valid = fit.r2 > 0.98 && ci_ok > 0.0;
  return fit;
}

AdmissibleRegion predicted_region(const NoiseSpec& spec) {
  AdmissibleRegion region;
  if (spec.is_space_time_white()) {
    // Flat spectrum + white time scored as alpha0 = alpha = 1 in the
    // regime-i formula.
    region.B = 2.0 - 1.0 - 0.5;
    region.white_convention = true;
    return region;
  }
  const double a0 = spec.effective_alpha0();
  const double alpha = spec.alpha_sum();
  region.B = spec.regime == SpaceRegime::I ? 2.0 - a0 - 0.5 * alpha
                                           : 0.5 * (3.0 - 2.0 * a0 - alpha);
  return region;
}

double chaos_increment_bound(int n, double t, double r, double x, double y,
                             const NoiseSpec& spec, double a0bar, double abar, double c) {
  if (n < 0) throw std::invalid_argument("chaos_increment_bound: n must be >= 0");
  if (!(t >= r && r >= 0.0))
    throw std::domain_error("chaos_increment_bound: need t >= r >= 0");
  const double a0 = spec.effective_alpha0();
  const double alpha = spec.alpha_sum();
  // Plain admissible region of the spec's stored exponents (no white-noise
  // relabeling here; the bound is per displayed formula).
  const double B = spec.regime == SpaceRegime::I ? 2.0 - a0 - 0.5 * alpha
                                                 : 0.5 * (3.0 - 2.0 * a0 - alpha);
  if (!(2.0 * a0bar + abar < B))
    throw std::domain_error(
        "chaos_increment_bound: exponent pair outside the admissible region");
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  double fact_pow, time_pow;
  if (spec.regime == SpaceRegime::I) {
    fact_pow = 0.5 * alpha - 1.0;
    time_pow = 0.5 * (4.0 - 2.0 * a0 - alpha) * n;
  } else {
    fact_pow = 0.5 * (alpha - 1.0);
    time_pow = 0.5 * (3.0 - 2.0 * a0 - alpha) * n;
  }
  return std::pow(c, n) * std::pow(nfact, fact_pow) *
         std::pow(std::abs(t - r), 2.0 * a0bar) * std::pow(std::abs(x - y), 2.0 * abar) *
         std::pow(t, time_pow);
}

}  // namespace pam
