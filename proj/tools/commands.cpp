#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "pam/chaos.hpp"
#include "pam/holder.hpp"
#include "pam/noise.hpp"
#include "pam/rng.hpp"
#include "pam/solver.hpp"

namespace pamlab {

namespace fs = std::filesystem;
using namespace pam;

int cmd_chaos(const Config& config) {
  const NoiseSpec spec = config.noise();
  const InitialCondition u0 = config.u0();
  const std::vector<double> levels = config.numbers_or("chaos.levels", {1, 2, 3});
  const std::vector<double> times = config.numbers_or("chaos.times", {0.25, 1.0});
  const double x = config.number_or("chaos.x", 0.0);
  McParams mc = config.mc();

  std::vector<ChaosEstimate> rows;
  for (double t : times)
    for (double level : levels) {
      const int n = static_cast<int>(level);
      McParams level_mc = mc;
      level_mc.seed = mc.seed + static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ULL +
                      static_cast<std::uint64_t>(std::llround(t * 1e6));
      rows.push_back(chaos_variance(n, t, spec, u0, level_mc, x));
    }

  const std::string csv = chaos_table_csv(rows, spec);
  const std::string out = config.output_dir();
  write_text_file(out + "/chaos.csv", csv);

  std::cout << "n     t        variance      stderr        bound         var/bound\n";
  for (const ChaosEstimate& e : rows) {
    std::cout << std::left << std::setw(6) << e.n << std::setw(9) << e.t << std::setw(14)
              << format_number(e.variance) << std::setw(14) << format_number(e.std_error)
              << std::setw(14) << format_number(e.bound_value) << std::setw(12)
              << format_number(e.bound_value > 0 ? e.variance / e.bound_value : 0.0);
    if (e.high_error) std::cout << "  (stderr above 10%)";
    std::cout << '\n';
  }
  std::cout << "wrote " << out << "/chaos.csv\n";
  return 0;
}

namespace {

EnsembleConfig ensemble_config_from(const Config& config) {
  EnsembleConfig ec;
  ec.solve.spec = config.noise();
  ec.solve.grid = config.grid();
  ec.solve.u0 = config.u0();
  ec.solve.snapshot_times = config.numbers("simulate.snapshot_times");
  ec.replicas = static_cast<int>(config.integer_or("simulate.replicas", 100));
  ec.master_seed = config.master_seed();
  ec.workers = config.workers();
  ec.store_fields = config.flag_or("simulate.store_fields", true);
  ec.solve.validate();
  return ec;
}

}  // namespace

int cmd_simulate(const Config& config) {
  const EnsembleConfig ec = ensemble_config_from(config);
  const FieldEnsemble ens = run_ensemble(ec);
  const std::string out = config.output_dir();

  write_text_file(out + "/stats.csv", ensemble_stats_csv(ens));
  if (ec.store_fields && config.flag_or("simulate.save_fields", true))
    save_ensemble(out + "/ensemble", ens);

  const MeanCheckReport mc = mean_check(ens);
  std::cout << "snapshots: " << ens.snapshot_times.size() << ", replicas: " << ec.replicas
            << '\n';
  for (const SnapshotScalars& sc : ens.scalars)
    std::cout << "t=" << format_number(sc.t) << "  <u>=" << format_number(sc.mean_avg.mean)
              << " +- " << format_number(sc.mean_avg.std_error)
              << "  <u^2>=" << format_number(sc.p2_avg.mean) << " +- "
              << format_number(sc.p2_avg.std_error) << '\n';
  std::cout << "mean-field check: max |z| = " << format_number(mc.max_abs_z) << '\n';
  std::cout << "wrote " << out << "/stats.csv\n";
  return 0;
}

namespace {

struct HolderOutputs {
  IncrementTable table;
  HolderFit fit;
};

HolderOutputs run_holder_mode(const Config& config, IncrementMode mode, int p,
                              const LagSpec& lags) {
  HolderOutputs out;
  const std::string dir = config.string_or("holder.ensemble_dir", "");
  if (!dir.empty()) {
    EnsembleReader reader(dir);
    IncrementAccumulator acc(reader.config().solve.grid, reader.snapshot_times(), lags,
                             mode, p);
    std::vector<double> block;
    for (int r = 0; r < reader.replicas(); ++r) {
      reader.read_replica(r, block);
      acc.consume(block);
    }
    out.table = acc.finalize();
  } else {
    // Inline streaming simulation; fields are never stored.
    EnsembleConfig ec = ensemble_config_from(config);
    ec.store_fields = false;
    IncrementAccumulator acc(ec.solve.grid, ec.solve.snapshot_times, lags, mode, p);
    for_each_replica_ordered(
        ec, [&](int, const Trajectory& traj) { acc.consume(traj.fields); });
    out.table = acc.finalize();
  }
  out.fit = fit_exponents(out.table);
  return out;
}

}  // namespace

int cmd_holder(const Config& config) {
  const int p = static_cast<int>(config.integer_or("holder.p", 2));
  LagSpec lags;
  lags.dt_lags = config.numbers_or("holder.dt_lags", {});
  lags.dx_lags = config.numbers_or("holder.dx_lags", {});
  const std::string mode_str = config.string_or("holder.mode", "all");
  const NoiseSpec spec = config.noise();
  const AdmissibleRegion region = predicted_region(spec);
  const std::string out = config.output_dir();

  struct ModeSpec {
    const char* name;
    IncrementMode mode;
  };
  std::vector<ModeSpec> modes;
  if (mode_str == "all") {
    modes = {{"rectangular", IncrementMode::Rectangular},
             {"time_marginal", IncrementMode::TimeMarginal},
             {"space_marginal", IncrementMode::SpaceMarginal}};
  } else if (mode_str == "rectangular") {
    modes = {{"rectangular", IncrementMode::Rectangular}};
  } else if (mode_str == "time_marginal") {
    modes = {{"time_marginal", IncrementMode::TimeMarginal}};
  } else if (mode_str == "space_marginal") {
    modes = {{"space_marginal", IncrementMode::SpaceMarginal}};
  } else {
    throw ConfigError("holder.mode must be all|rectangular|time_marginal|space_marginal");
  }

  for (const ModeSpec& m : modes) {
    const HolderOutputs ho = run_holder_mode(config, m.mode, p, lags);
    write_text_file(out + "/increments_" + m.name + ".csv", increment_table_csv(ho.table));
    write_text_file(out + "/holder_fit_" + m.name + ".csv",
                    holder_fit_csv(ho.fit, region));
    if (m.mode != IncrementMode::SpaceMarginal)
      write_text_file(out + "/loglog_time_" + m.name + ".dat", loglog_data(ho.table, true));
    if (m.mode != IncrementMode::TimeMarginal)
      write_text_file(out + "/loglog_space_" + m.name + ".dat",
                      loglog_data(ho.table, false));
    std::cout << m.name << ": alpha0_hat=" << format_number(ho.fit.alpha0_hat)
              << " alpha_hat=" << format_number(ho.fit.alpha_hat)
              << " r2=" << format_number(ho.fit.r2) << "  B=" << format_number(region.B)
              << "  2a0+a=" << format_number(2.0 * ho.fit.alpha0_hat + ho.fit.alpha_hat)
              << '\n';
  }
  std::cout << "wrote holder artifacts to " << out << '\n';
  return 0;
}

int cmd_bounds(const Config& config) {
  const NoiseSpec spec = config.noise();
  const std::vector<double> ps = config.numbers_or("bounds.p_values", {2, 4, 8});
  const std::vector<double> ts = config.numbers_or("bounds.times", {0.25, 0.5, 1.0});
  const std::vector<double> ns = config.numbers_or("bounds.levels", {1, 2, 3, 4, 5});
  const double c = config.number_or("bounds.c", 1.0);
  const double C = config.number_or("bounds.C", 1.0);

  std::ostringstream csv;
  csv << "kind,p,n,t,value\n";
  for (double t : ts) {
    for (double p : ps)
      csv << "moment_bound," << format_number(p) << ",," << format_number(t) << ','
          << format_number(moment_bound(p, t, spec, C, c)) << '\n';
    for (double n : ns)
      csv << "chaos_variance_bound,," << static_cast<int>(n) << ',' << format_number(t)
          << ',' << format_number(chaos_variance_bound(static_cast<int>(n), t, spec, c))
          << '\n';
  }
  const AdmissibleRegion region = predicted_region(spec);
  csv << "predicted_region_B,,,," << format_number(region.B) << '\n';

  const std::string out = config.output_dir();
  write_text_file(out + "/bounds.csv", csv.str());
  std::cout << "admissible region: 2*a0bar + abar < " << format_number(region.B)
            << (region.white_convention ? " (space-time white convention)" : "") << '\n';
  std::cout << "wrote " << out << "/bounds.csv\n";
  return 0;
}

int cmd_report(const std::string& dir) {
  bool found = false;
  auto show = [&](const std::string& name) {
    const std::string path = dir + "/" + name;
    if (!fs::exists(path)) return;
    found = true;
    std::cout << "==== " << name << " ====\n" << read_text_file(path) << '\n';
  };
  show("selftest.csv");
  show("chaos.csv");
  show("bounds.csv");
  for (const char* m : {"rectangular", "time_marginal", "space_marginal"})
    show(std::string("holder_fit_") + m + ".csv");
  if (fs::exists(dir + "/stats.csv")) {
    found = true;
    std::cout << "==== stats.csv (first rows) ====\n";
    std::istringstream in(read_text_file(dir + "/stats.csv"));
    std::string line;
    for (int i = 0; i < 6 && std::getline(in, line); ++i) std::cout << line << '\n';
  }
  if (!found) {
    std::cerr << "no artifacts found under " << dir << '\n';
    return 1;
  }
  return 0;
}

}  // namespace pamlab
