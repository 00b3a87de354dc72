#ifndef PAM_IO_HPP
#define PAM_IO_HPP

#include <memory>
#include <string>
#include <vector>

#include "pam/chaos.hpp"
#include "pam/holder.hpp"
#include "pam/solver.hpp"

namespace pam {

// Deterministic number formatting for all text artifacts ("%.12g"): a rerun
// with the same master seed reproduces outputs byte for byte.
std::string format_number(double v);

std::string chaos_table_csv(const std::vector<ChaosEstimate>& rows, const NoiseSpec& spec);
std::string increment_table_csv(const IncrementTable& table);
std::string holder_fit_csv(const HolderFit& fit, const AdmissibleRegion& region);
std::string ensemble_stats_csv(const FieldEnsemble& ens);

// Two-column log-log data (lag, moment) for external plotting.
std::string loglog_data(const IncrementTable& table, bool time_axis);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Ensemble persistence: <dir>/manifest.json + <dir>/fields.bin
// (float64 little-endian, replica-major, then snapshot-major, then
// row-major space) + <dir>/stats.csv.
void save_ensemble(const std::string& dir, const FieldEnsemble& ens);

// Streaming reader over the persisted layout.
class EnsembleReader {
 public:
  explicit EnsembleReader(const std::string& dir);
  ~EnsembleReader();
  EnsembleReader(EnsembleReader&&) noexcept;

  const EnsembleConfig& config() const;
  const std::vector<double>& snapshot_times() const;
  int replicas() const;
  int points() const;
  // Reads one replica block (snapshots x points doubles) into out.
  void read_replica(int replica, std::vector<double>& out);

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace pam

#endif
