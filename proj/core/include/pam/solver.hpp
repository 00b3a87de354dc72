#ifndef PAM_SOLVER_HPP
#define PAM_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pam/chaos.hpp"
#include "pam/grid.hpp"
#include "pam/noise_spec.hpp"
#include "pam/stats.hpp"

namespace pam {

// Pseudospectral exponential-integrator Euler scheme for the multiplicative
// stochastic heat equation in the white-in-time regime, where the Skorohod
// and Ito formulations coincide. One step:
//   u_{k+1} = IFFT[ exp(-|xi|^2 dt / 2) FFT[ u_k (1 + dW_k) ] ]
// with dW_k = sqrt(dt) X_k and X_k the synthesized spatial noise field.
struct SolveConfig {
  NoiseSpec spec;
  GridSpec grid;
  InitialCondition u0;
  std::vector<double> snapshot_times;

  void validate() const;  // white time only; snapshots on the step lattice
};

struct Trajectory {
  std::vector<double> snapshot_times;
  std::vector<double> fields;  // snapshots x grid points
  int points = 0;

  std::span<const double> snapshot(int i) const {
    return {fields.data() + static_cast<std::size_t>(i) * points,
            static_cast<std::size_t>(points)};
  }
};

// Deterministic per (config, seed). Throws std::runtime_error with the step
// index if the field stops being finite.
Trajectory solve_one_path(const SolveConfig& config, std::uint64_t seed);

struct EnsembleConfig {
  SolveConfig solve;
  int replicas = 2;
  std::uint64_t master_seed = 0;
  int workers = 0;       // 0 = hardware concurrency
  bool store_fields = true;
};

struct PointStats {
  double mean = 0.0, mean_se = 0.0;
  double var = 0.0;
  double p2 = 0.0, p2_se = 0.0;
  double p4 = 0.0, p4_se = 0.0;
};

struct SnapshotScalars {
  double t = 0.0;
  MeanStdErr mean_avg;  // spatial average of the field, over replicas
  MeanStdErr p2_avg;    // spatial average of u^2, over replicas
};

struct FieldEnsemble {
  EnsembleConfig config;
  std::vector<double> snapshot_times;
  int points = 0;
  std::vector<double> fields;  // replica-major, then snapshot-major, then space
  std::vector<PointStats> stats;        // snapshots x points
  std::vector<SnapshotScalars> scalars;  // per snapshot

  std::span<const double> field(int replica, int snap) const;
  const PointStats& stat(int snap, int point) const {
    return stats[static_cast<std::size_t>(snap) * points + point];
  }
};

// Parallel replicas with per-replica derived seeds; the consumer is invoked
// strictly in replica order (so reductions are independent of scheduling).
void for_each_replica_ordered(const EnsembleConfig& config,
                              const std::function<void(int, const Trajectory&)>& consume);

FieldEnsemble run_ensemble(const EnsembleConfig& config);

// Ensemble mean field against the exact heat evolution of u0 (periodized on
// the torus), as standardized deviations.
struct MeanCheckReport {
  double max_abs_z = 0.0;
  std::vector<double> z;  // snapshots x points
};
MeanCheckReport mean_check(const FieldEnsemble& ens);

// Heat evolution of u0 on the periodic domain (image sum), for tests and
// mean_check.
double periodic_heat_evolution(const InitialCondition& u0, const GridSpec& grid,
                               double t, std::span<const double> x);

}  // namespace pam

#endif
