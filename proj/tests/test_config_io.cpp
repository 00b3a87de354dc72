#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "pam/config.hpp"
#include "pam/io.hpp"
#include "pam/solver.hpp"

using namespace pam;

namespace {

const char* kBaseConfig = R"({
  "master_seed": 12345,
  "workers": 2,
  "output_dir": "out",
  "noise": {"time": "white", "regime": "i", "alphas": [0.0], "amplitude": 0.15915494309189535},
  "grid": {"d": 1, "L": 8.0, "N": 128, "dt": 0.001, "T": 0.1},
  "u0": {"kind": "constant_one"},
  "mc": {"samples": 5000},
  "simulate": {"replicas": 8, "snapshot_times": [0.05, 0.1]}
})";

}  // namespace

TEST_CASE("config requires a master seed") {
  const Config missing = Config::from_string(R"({"workers": 1})");
  CHECK_THROWS_AS(missing.master_seed(), ConfigError);
  const Config with = Config::from_string(kBaseConfig);
  CHECK(with.master_seed() == 12345);
}

TEST_CASE("config typed accessors and overrides") {
  const Config c = Config::from_string(
      kBaseConfig, {"grid.N=256", "noise.amplitude=0.5", "u0.kind=gaussian_bump",
                    "u0.width=0.7", "simulate.store_fields=false"});
  CHECK(c.grid().N == 256);
  CHECK(c.noise().amplitude == doctest::Approx(0.5));
  CHECK(c.u0().kind == InitialCondition::Kind::GaussianBump);
  CHECK(c.u0().width == doctest::Approx(0.7));
  CHECK_FALSE(c.flag_or("simulate.store_fields", true));
  CHECK(c.workers() == 2);
  CHECK(c.output_dir() == "out");
  CHECK(c.mc().samples == 5000);
  CHECK(c.mc().seed == 12345);
}

TEST_CASE("config canonical round-trip") {
  const Config a = Config::from_string(kBaseConfig, {"grid.N=256"});
  const Config b = Config::from_string(a.canonical_text());
  CHECK(a.canonical_text() == b.canonical_text());
}

TEST_CASE("config validation aggregates all failures") {
  const Config bad = Config::from_string(
      R"({"noise": {"time": "riesz", "alpha0": 2.0, "regime": "i", "alphas": [0.0]},
          "grid": {"d": 1, "L": 8.0, "N": 100, "dt": 0.001, "T": 0.1},
          "simulate": {"replicas": 1, "snapshot_times": [0.05]}})");
  const std::vector<std::string> errors = bad.validate("simulate");
  CHECK(errors.size() >= 4);  // seed, noise, grid, replicas
  bool mentions_power_of_two = false;
  for (const std::string& e : errors)
    if (e.find("power of two") != std::string::npos) mentions_power_of_two = true;
  CHECK(mentions_power_of_two);
}

TEST_CASE("noise preset shorthand") {
  const Config c = Config::from_string(
      R"({"master_seed": 1, "noise": {"preset": "space_time_white", "d": 1}})");
  const NoiseSpec spec = c.noise();
  CHECK(spec.is_space_time_white());
  CHECK(spec.amplitude == doctest::Approx(1.0 / (2.0 * M_PI)));
}

TEST_CASE("csv writers are deterministic") {
  std::vector<ChaosEstimate> rows(2);
  rows[0] = {1, 0.25, 0.0, 0.2820947, 0.0003, 1.0, 100000, 7, false};
  rows[1] = {2, 0.25, 0.0, 0.0625, 0.0002, 0.5, 100000, 7, false};
  const NoiseSpec spec = NoiseSpec::white_preset(1);
  const std::string a = chaos_table_csv(rows, spec);
  const std::string b = chaos_table_csv(rows, spec);
  CHECK(a == b);
  CHECK(a.find("n,t,alpha0,alpha,variance,stderr,bound,samples,seed") == 0);
  CHECK(a.find("0.2820947") != std::string::npos);
}

TEST_CASE("ensemble save/load round trip") {
  EnsembleConfig ec;
  ec.solve.spec = NoiseSpec::white_preset(1);
  ec.solve.grid = {1, 8.0, 64, 1e-3, 0.1};
  ec.solve.u0 = InitialCondition::gaussian_bump(0.5);
  ec.solve.snapshot_times = {0.05, 0.1};
  ec.replicas = 6;
  ec.master_seed = 4242;
  const FieldEnsemble ens = run_ensemble(ec);

  const std::string dir =
      (std::filesystem::temp_directory_path() / "pam_ens_test").string();
  std::filesystem::remove_all(dir);
  save_ensemble(dir, ens);

  EnsembleReader reader(dir);
  CHECK(reader.replicas() == 6);
  CHECK(reader.points() == 64);
  CHECK(reader.snapshot_times() == ens.snapshot_times);
  CHECK(reader.config().solve.u0.kind == InitialCondition::Kind::GaussianBump);
  CHECK(reader.config().solve.spec.is_space_time_white());

  std::vector<double> block;
  for (int r : {0, 3, 5}) {
    reader.read_replica(r, block);
    const std::size_t sz = ens.snapshot_times.size() * static_cast<std::size_t>(64);
    for (std::size_t i = 0; i < sz; ++i)
      CHECK(block[i] == ens.fields[sz * r + i]);  // bit-identical
  }
  CHECK_THROWS_AS(reader.read_replica(6, block), std::out_of_range);
  std::filesystem::remove_all(dir);
}

TEST_CASE("format_number is stable") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-7) == "1e-07");
}
