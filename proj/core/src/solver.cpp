#include "pam/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <condition_variable>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fft.hpp"
#include "pam/noise.hpp"
#include "pam/parallel.hpp"
#include "pam/rng.hpp"
#include "pam/specfn.hpp"

namespace pam {

void SolveConfig::validate() const {
  grid.validate();
  spec.validate_hypothesis();
  if (spec.time_mode != TimeMode::White)
    throw std::invalid_argument(
        "solver: colored-in-time stepping is unsupported (Skorohod corrections "
        "unavailable); use white time");
  if (u0.kind == InitialCondition::Kind::PointMass)
    throw std::invalid_argument("solver: point-mass initial data is not representable on the grid");
  if (spec.dim() != grid.d)
    throw std::invalid_argument("solver: noise/grid dimension mismatch");
  if (snapshot_times.empty())
    throw std::invalid_argument("solver: need at least one snapshot time");
  for (double t : snapshot_times) {
    if (t < 0.0 || t > grid.T * (1.0 + 1e-12))
      throw std::invalid_argument("solver: snapshot times must lie in [0, T]");
    const double k = t / grid.dt;
    if (std::abs(k - std::llround(k)) > 1e-9 * std::max(1.0, k))
      throw std::invalid_argument("solver: snapshot times must be multiples of dt");
  }
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw std::invalid_argument("solver: snapshot times must be sorted");
}

namespace {

class PathSolver {
 public:
  explicit PathSolver(const SolveConfig& config)
      : config_(config),
        fft_(config.grid.d, config.grid.N),
        synth_(config.spec, config.grid),
        points_(config.grid.points()) {
    const GridSpec& g = config_.grid;
    // Heat multiplier exp(-|xi|^2 dt / 2) over the half-spectrum layout.
    const double base = 2.0 * M_PI / g.L;
    const int n = g.N;
    if (g.d == 1) {
      expfac_.resize(n / 2 + 1);
      for (int k = 0; k <= n / 2; ++k) {
        const double xi = base * k;
        expfac_[k] = std::exp(-0.5 * xi * xi * g.dt);
      }
    } else {
      const int cols = n / 2 + 1;
      expfac_.resize(static_cast<std::size_t>(n) * cols);
      for (int k0 = 0; k0 < n; ++k0) {
        const int f0 = k0 <= n / 2 ? k0 : k0 - n;
        for (int k1 = 0; k1 < cols; ++k1) {
          const double xi2 = base * base * (static_cast<double>(f0) * f0 +
                                            static_cast<double>(k1) * k1);
          expfac_[static_cast<std::size_t>(k0) * cols + k1] = std::exp(-0.5 * xi2 * g.dt);
        }
      }
    }
    u_.resize(points_);
    noise_.resize(points_);
    spec_buf_.resize(fft_.spectral_size());
    for (double t : config_.snapshot_times)
      snapshot_steps_.push_back(static_cast<int>(std::llround(t / g.dt)));
  }

  Trajectory solve(std::uint64_t seed) {
    const GridSpec& g = config_.grid;
    Rng rng(seed);
    const std::vector<double> xs = g.axis_coords();
    if (g.d == 1) {
      for (int j = 0; j < g.N; ++j) {
        const double x[1] = {xs[j]};
        u_[j] = config_.u0.value(x);
      }
    } else {
      for (int j0 = 0; j0 < g.N; ++j0)
        for (int j1 = 0; j1 < g.N; ++j1) {
          const double x[2] = {xs[j0], xs[j1]};
          u_[j0 * g.N + j1] = config_.u0.value(x);
        }
    }

    Trajectory traj;
    traj.snapshot_times = config_.snapshot_times;
    traj.points = points_;
    traj.fields.resize(config_.snapshot_times.size() * static_cast<std::size_t>(points_));

    std::size_t next_snap = 0;
    auto record_if_due = [&](int step) {
      while (next_snap < snapshot_steps_.size() && snapshot_steps_[next_snap] == step) {
        std::copy(u_.begin(), u_.end(),
                  traj.fields.begin() + static_cast<std::ptrdiff_t>(next_snap) * points_);
        ++next_snap;
      }
    };
    record_if_due(0);

    const double sqrt_dt = std::sqrt(g.dt);
    const double inv_points = 1.0 / static_cast<double>(points_);
    const int steps = g.steps();
    for (int step = 0; step < steps; ++step) {
      synth_.sample(rng, noise_);
      bool finite = true;
      for (int j = 0; j < points_; ++j) {
        u_[j] *= 1.0 + sqrt_dt * noise_[j];
        finite = finite && std::isfinite(u_[j]);
      }
      if (!finite) {
        std::ostringstream msg;
        msg << "solver blow-up: non-finite field at step " << step;
        throw std::runtime_error(msg.str());
      }
      fft_.forward(u_.data(), spec_buf_.data());
      for (std::size_t k = 0; k < spec_buf_.size(); ++k) spec_buf_[k] *= expfac_[k];
      fft_.inverse(spec_buf_.data(), u_.data());
      for (int j = 0; j < points_; ++j) u_[j] *= inv_points;
      record_if_due(step + 1);
    }
    if (next_snap != snapshot_steps_.size())
      throw std::runtime_error("solver: unrecorded snapshots remain (internal error)");
    return traj;
  }

 private:
  SolveConfig config_;
  RealFft fft_;
  SpatialSynthesizer synth_;
  int points_;
  std::vector<double> expfac_;
  std::vector<double> u_;
  std::vector<double> noise_;
  std::vector<std::complex<double>> spec_buf_;
  std::vector<int> snapshot_steps_;
};

}  // namespace

Trajectory solve_one_path(const SolveConfig& config, std::uint64_t seed) {
  config.validate();
  PathSolver solver(config);
  return solver.solve(seed);
}

void for_each_replica_ordered(const EnsembleConfig& config,
                              const std::function<void(int, const Trajectory&)>& consume) {
  config.solve.validate();
  if (config.replicas < 2)
    throw std::invalid_argument("run_ensemble: need at least 2 replicas");
  const int workers = resolve_workers(config.workers, config.replicas);

  std::mutex mu;
  std::condition_variable cv;
  int next_to_consume = 0;
  std::map<int, Trajectory> parked;
  std::exception_ptr error;
  std::atomic<int> next_index{0};

  auto worker_main = [&]() {
    PathSolver solver(config.solve);
    while (true) {
      const int r = next_index.fetch_add(1);
      if (r >= config.replicas) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (error) return;
      }
      Trajectory traj;
      try {
        traj = solver.solve(Rng::for_replica(config.master_seed, r).next_u64());
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        cv.notify_all();
        return;
      }
      std::unique_lock<std::mutex> lock(mu);
      parked.emplace(r, std::move(traj));
      cv.notify_all();
      // Drain in order; whichever thread holds the next replica flushes.
      while (!error) {
        auto it = parked.find(next_to_consume);
        if (it == parked.end()) break;
        Trajectory ready = std::move(it->second);
        parked.erase(it);
        const int idx = next_to_consume;
        lock.unlock();
        try {
          consume(idx, ready);
        } catch (...) {
          lock.lock();
          if (!error) error = std::current_exception();
          cv.notify_all();
          return;
        }
        lock.lock();
        ++next_to_consume;
        cv.notify_all();
      }
      // Bound the reorder buffer so memory stays O(workers).
      cv.wait(lock, [&] {
        return error || static_cast<int>(parked.size()) < 2 * workers ||
               parked.count(next_to_consume) > 0;
      });
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker_main);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  if (next_to_consume != config.replicas)
    throw std::runtime_error("run_ensemble: replica consumption incomplete (internal error)");
}

FieldEnsemble run_ensemble(const EnsembleConfig& config) {
  FieldEnsemble ens;
  ens.config = config;
  ens.snapshot_times = config.solve.snapshot_times;
  ens.points = config.solve.grid.points();
  const int snaps = static_cast<int>(ens.snapshot_times.size());
  const int points = ens.points;
  const std::size_t block = static_cast<std::size_t>(snaps) * points;
  const int R = config.replicas;

  if (config.store_fields) ens.fields.resize(block * static_cast<std::size_t>(R));

  // Accumulated in strict replica order: deterministic reductions.
  std::vector<double> s1(block, 0.0), s2(block, 0.0), s4(block, 0.0), s8(block, 0.0);
  std::vector<std::vector<double>> rep_mean_avg(snaps, std::vector<double>(R));
  std::vector<std::vector<double>> rep_p2_avg(snaps, std::vector<double>(R));

  for_each_replica_ordered(config, [&](int r, const Trajectory& traj) {
    if (config.store_fields)
      std::copy(traj.fields.begin(), traj.fields.end(), ens.fields.begin() + block * r);
    for (int s = 0; s < snaps; ++s) {
      const std::span<const double> f = traj.snapshot(s);
      double sum = 0.0, sum2 = 0.0;
      for (int j = 0; j < points; ++j) {
        const double v = f[j];
        const double v2 = v * v;
        const std::size_t idx = static_cast<std::size_t>(s) * points + j;
        s1[idx] += v;
        s2[idx] += v2;
        s4[idx] += v2 * v2;
        s8[idx] += v2 * v2 * v2 * v2;
        sum += v;
        sum2 += v2;
      }
      rep_mean_avg[s][r] = sum / points;
      rep_p2_avg[s][r] = sum2 / points;
    }
  });

  ens.stats.resize(block);
  const double n = static_cast<double>(R);
  for (std::size_t idx = 0; idx < block; ++idx) {
    PointStats& ps = ens.stats[idx];
    const double m1 = s1[idx] / n;
    const double m2 = s2[idx] / n;
    const double m4 = s4[idx] / n;
    const double m8 = s8[idx] / n;
    ps.mean = m1;
    ps.var = std::max(0.0, (m2 - m1 * m1) * n / (n - 1.0));
    ps.mean_se = std::sqrt(ps.var / n);
    ps.p2 = m2;
    ps.p2_se = std::sqrt(std::max(0.0, (m4 - m2 * m2) * n / (n - 1.0)) / n);
    ps.p4 = m4;
    ps.p4_se = std::sqrt(std::max(0.0, (m8 - m4 * m4) * n / (n - 1.0)) / n);
  }
  ens.scalars.resize(snaps);
  for (int s = 0; s < snaps; ++s) {
    ens.scalars[s].t = ens.snapshot_times[s];
    ens.scalars[s].mean_avg = mean_and_stderr(rep_mean_avg[s]);
    ens.scalars[s].p2_avg = mean_and_stderr(rep_p2_avg[s]);
  }
  return ens;
}

std::span<const double> FieldEnsemble::field(int replica, int snap) const {
  const std::size_t block = snapshot_times.size() * static_cast<std::size_t>(points);
  return {fields.data() + block * replica + static_cast<std::size_t>(snap) * points,
          static_cast<std::size_t>(points)};
}

double periodic_heat_evolution(const InitialCondition& u0, const GridSpec& grid,
                               double t, std::span<const double> x) {
  if (u0.kind == InitialCondition::Kind::ConstantOne) return 1.0;
  // Image sum of the free-space evolution; a few images suffice under the
  // L > 8 sqrt(T) truncation rule.
  const double w = t + u0.width;
  if (grid.d == 1) {
    double v = 0.0;
    for (int m = -3; m <= 3; ++m) v += heat_kernel1(w, x[0] + m * grid.L);
    return v;
  }
  double v = 0.0;
  for (int m0 = -2; m0 <= 2; ++m0)
    for (int m1 = -2; m1 <= 2; ++m1) {
      const double p[2] = {x[0] + m0 * grid.L, x[1] + m1 * grid.L};
      v += heat_kernel(w, p);
    }
  return v;
}

MeanCheckReport mean_check(const FieldEnsemble& ens) {
  const GridSpec& grid = ens.config.solve.grid;
  const std::vector<double> xs = grid.axis_coords();
  MeanCheckReport report;
  const int snaps = static_cast<int>(ens.snapshot_times.size());
  report.z.resize(static_cast<std::size_t>(snaps) * ens.points);
  for (int s = 0; s < snaps; ++s) {
    const double t = ens.snapshot_times[s];
    for (int j = 0; j < ens.points; ++j) {
      double exact;
      if (grid.d == 1) {
        const double p[1] = {xs[j]};
        exact = periodic_heat_evolution(ens.config.solve.u0, grid, t, p);
      } else {
        const double p[2] = {xs[j / grid.N], xs[j % grid.N]};
        exact = periodic_heat_evolution(ens.config.solve.u0, grid, t, p);
      }
      const PointStats& ps = ens.stat(s, j);
      double z = 0.0;
      if (ps.mean_se > 0.0)
        z = (ps.mean - exact) / ps.mean_se;
      else if (ps.mean != exact)
        z = std::numeric_limits<double>::infinity();
      report.z[static_cast<std::size_t>(s) * ens.points + j] = z;
      report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
    }
  }
  return report;
}

}  // namespace pam
