#include "pam/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json_codec.hpp"

namespace pam {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::json noise_to_json(const NoiseSpec& spec) {
  json j;
  j["time"] = spec.time_mode == TimeMode::White ? "white" : "riesz";
  if (spec.time_mode == TimeMode::Riesz) j["alpha0"] = spec.alpha0;
  j["regime"] = spec.regime == SpaceRegime::I ? "i" : "ii";
  if (spec.regime == SpaceRegime::I)
    j["alphas"] = spec.alphas;
  else
    j["alpha"] = spec.alpha_ii;
  j["amplitude"] = spec.amplitude;
  return j;
}

NoiseSpec noise_from_json(const json& j) {
  NoiseSpec spec;
  if (j.contains("preset")) {
    const std::string p = j.at("preset").get<std::string>();
    if (p != "space_time_white")
      throw std::invalid_argument("noise.preset: unknown preset '" + p + "'");
    spec = NoiseSpec::white_preset(j.value("d", 1));
    if (j.contains("amplitude")) spec.amplitude = j.at("amplitude").get<double>();
    spec.validate();
    return spec;
  }
  const std::string tm = j.value("time", "white");
  if (tm == "white") {
    spec.time_mode = TimeMode::White;
    spec.alpha0 = 1.0;
  } else if (tm == "riesz") {
    spec.time_mode = TimeMode::Riesz;
    spec.alpha0 = j.at("alpha0").get<double>();
  } else {
    throw std::invalid_argument("noise.time must be 'white' or 'riesz'");
  }
  const std::string reg = j.value("regime", "i");
  if (reg == "i") {
    spec.regime = SpaceRegime::I;
    spec.alphas = j.value("alphas", std::vector<double>{0.0});
  } else if (reg == "ii") {
    spec.regime = SpaceRegime::II;
    spec.alpha_ii = j.at("alpha").get<double>();
  } else {
    throw std::invalid_argument("noise.regime must be 'i' or 'ii'");
  }
  spec.amplitude = j.value("amplitude", 1.0);
  spec.validate();
  return spec;
}

nlohmann::json grid_to_json(const GridSpec& grid) {
  return json{{"d", grid.d}, {"L", grid.L}, {"N", grid.N}, {"dt", grid.dt}, {"T", grid.T}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.d = j.value("d", 1);
  g.L = j.at("L").get<double>();
  g.N = j.at("N").get<int>();
  g.dt = j.at("dt").get<double>();
  g.T = j.at("T").get<double>();
  g.validate();
  return g;
}

nlohmann::json u0_to_json(const InitialCondition& u0) {
  json j;
  switch (u0.kind) {
    case InitialCondition::Kind::ConstantOne:
      j["kind"] = "constant_one";
      break;
    case InitialCondition::Kind::GaussianBump:
      j["kind"] = "gaussian_bump";
      j["width"] = u0.width;
      break;
    case InitialCondition::Kind::PointMass:
      j["kind"] = "point_mass";
      break;
  }
  return j;
}

InitialCondition u0_from_json(const json& j) {
  const std::string kind = j.value("kind", "constant_one");
  if (kind == "constant_one") return InitialCondition::constant_one();
  if (kind == "gaussian_bump") return InitialCondition::gaussian_bump(j.value("width", 1.0));
  if (kind == "point_mass") return InitialCondition::point_mass();
  throw std::invalid_argument("u0.kind must be constant_one, gaussian_bump or point_mass");
}

std::string chaos_table_csv(const std::vector<ChaosEstimate>& rows, const NoiseSpec& spec) {
  std::ostringstream out;
  out << "n,t,alpha0,alpha,variance,stderr,bound,samples,seed\n";
  for (const ChaosEstimate& e : rows) {
    out << e.n << ',' << format_number(e.t) << ','
        << format_number(spec.effective_alpha0()) << ','
        << format_number(spec.alpha_sum()) << ',' << format_number(e.variance) << ','
        << format_number(e.std_error) << ',' << format_number(e.bound_value) << ','
        << e.samples << ',' << e.seed << '\n';
  }
  return out.str();
}

namespace {
const char* mode_name(IncrementMode mode) {
  switch (mode) {
    case IncrementMode::Rectangular:
      return "rectangular";
    case IncrementMode::TimeMarginal:
      return "time_marginal";
    case IncrementMode::SpaceMarginal:
      return "space_marginal";
  }
  return "?";
}
}  // namespace

std::string increment_table_csv(const IncrementTable& table) {
  std::ostringstream out;
  out << "mode,p,dt_lag,dx_lag,estimate,stderr\n";
  for (const IncrementRow& row : table.rows) {
    out << mode_name(table.mode) << ',' << row.p << ',' << format_number(row.dt_lag)
        << ',' << format_number(row.dx_lag) << ',' << format_number(row.estimate) << ','
        << format_number(row.std_error) << '\n';
  }
  return out.str();
}

std::string holder_fit_csv(const HolderFit& fit, const AdmissibleRegion& region) {
  std::ostringstream out;
  out << "p,alpha0_hat,alpha_hat,ci0,ci,r2,B,two_a0_plus_a,valid\n";
  const double sum = 2.0 * fit.alpha0_hat + fit.alpha_hat;
  out << fit.p << ',' << format_number(fit.alpha0_hat) << ','
      << format_number(fit.alpha_hat) << ',' << format_number(fit.ci0) << ','
      << format_number(fit.ci) << ',' << format_number(fit.r2) << ','
      << format_number(region.B) << ',' << format_number(sum) << ','
      << (fit.valid ? 1 : 0) << '\n';
  return out.str();
}

std::string ensemble_stats_csv(const FieldEnsemble& ens) {
  std::ostringstream out;
  out << "t,x_index,mean,mean_stderr,var,p2,p2_stderr,p4,p4_stderr\n";
  const int snaps = static_cast<int>(ens.snapshot_times.size());
  for (int s = 0; s < snaps; ++s)
    for (int j = 0; j < ens.points; ++j) {
      const PointStats& ps = ens.stat(s, j);
      out << format_number(ens.snapshot_times[s]) << ',' << j << ','
          << format_number(ps.mean) << ',' << format_number(ps.mean_se) << ','
          << format_number(ps.var) << ',' << format_number(ps.p2) << ','
          << format_number(ps.p2_se) << ',' << format_number(ps.p4) << ','
          << format_number(ps.p4_se) << '\n';
    }
  return out.str();
}

std::string loglog_data(const IncrementTable& table, bool time_axis) {
  std::ostringstream out;
  out << "# log10(lag) log10(moment)\n";
  for (const IncrementRow& row : table.rows) {
    const double lag = time_axis ? row.dt_lag : row.dx_lag;
    if (!(lag > 0.0) || !(row.estimate > 0.0)) continue;
    out << format_number(std::log10(lag)) << ' ' << format_number(std::log10(row.estimate))
        << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_ensemble(const std::string& dir, const FieldEnsemble& ens) {
  if (ens.fields.empty())
    throw std::runtime_error("save_ensemble: ensemble was run without store_fields");
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = "pam-ensemble-v1";
  manifest["noise"] = noise_to_json(ens.config.solve.spec);
  manifest["grid"] = grid_to_json(ens.config.solve.grid);
  manifest["u0"] = u0_to_json(ens.config.solve.u0);
  manifest["master_seed"] = ens.config.master_seed;
  manifest["replicas"] = ens.config.replicas;
  manifest["snapshot_times"] = ens.snapshot_times;
  manifest["layout"] = "replica-major; per replica snapshot-major; row-major space";
  manifest["dtype"] = "float64-le";
  manifest["fields_file"] = "fields.bin";
  write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");

  std::ofstream bin(dir + "/fields.bin", std::ios::binary);
  if (!bin) throw std::runtime_error("save_ensemble: cannot open fields.bin");
  bin.write(reinterpret_cast<const char*>(ens.fields.data()),
            static_cast<std::streamsize>(ens.fields.size() * sizeof(double)));
  if (!bin) throw std::runtime_error("save_ensemble: write failed");

  write_text_file(dir + "/stats.csv", ensemble_stats_csv(ens));
}

struct EnsembleReader::Impl {
  EnsembleConfig config;
  std::vector<double> snapshot_times;
  int points = 0;
  std::ifstream bin;
  std::size_t block = 0;
};

EnsembleReader::EnsembleReader(const std::string& dir) : impl_(std::make_unique<Impl>()) {
  const json manifest = json::parse(read_text_file(dir + "/manifest.json"));
  if (manifest.value("format", "") != "pam-ensemble-v1")
    throw std::runtime_error("EnsembleReader: unrecognized manifest format");
  impl_->config.solve.spec = noise_from_json(manifest.at("noise"));
  impl_->config.solve.grid = grid_from_json(manifest.at("grid"));
  impl_->config.solve.u0 = u0_from_json(manifest.at("u0"));
  impl_->config.master_seed = manifest.at("master_seed").get<std::uint64_t>();
  impl_->config.replicas = manifest.at("replicas").get<int>();
  impl_->snapshot_times = manifest.at("snapshot_times").get<std::vector<double>>();
  impl_->config.solve.snapshot_times = impl_->snapshot_times;
  impl_->points = impl_->config.solve.grid.points();
  impl_->block = impl_->snapshot_times.size() * static_cast<std::size_t>(impl_->points);
  impl_->bin.open(dir + "/" + manifest.value("fields_file", "fields.bin"), std::ios::binary);
  if (!impl_->bin) throw std::runtime_error("EnsembleReader: cannot open fields file");
}

EnsembleReader::~EnsembleReader() = default;
EnsembleReader::EnsembleReader(EnsembleReader&&) noexcept = default;

const EnsembleConfig& EnsembleReader::config() const { return impl_->config; }
const std::vector<double>& EnsembleReader::snapshot_times() const {
  return impl_->snapshot_times;
}
int EnsembleReader::replicas() const { return impl_->config.replicas; }
int EnsembleReader::points() const { return impl_->points; }

void EnsembleReader::read_replica(int replica, std::vector<double>& out) {
  if (replica < 0 || replica >= impl_->config.replicas)
    throw std::out_of_range("EnsembleReader: replica index out of range");
  out.resize(impl_->block);
  impl_->bin.clear();
  impl_->bin.seekg(static_cast<std::streamoff>(impl_->block * sizeof(double)) * replica);
  impl_->bin.read(reinterpret_cast<char*>(out.data()),
                  static_cast<std::streamsize>(impl_->block * sizeof(double)));
  if (!impl_->bin) throw std::runtime_error("EnsembleReader: short read");
}

}  // namespace pam
