#ifndef PAM_CONFIG_HPP
#define PAM_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pam/chaos.hpp"
#include "pam/grid.hpp"
#include "pam/noise_spec.hpp"

namespace pam {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One JSON config file per experiment plus dotted-path command line
// overrides ("grid.N=1024", "noise.time=riesz"). All randomness flows from
// the mandatory master_seed field.
class Config {
 public:
  static Config from_file(const std::string& path,
                          const std::vector<std::string>& overrides = {});
  static Config from_string(const std::string& text,
                            const std::vector<std::string>& overrides = {});
  Config();
  ~Config();
  Config(const Config&);
  Config& operator=(const Config&);

  std::string canonical_text() const;  // stable serialization (sorted keys)

  std::uint64_t master_seed() const;  // throws ConfigError if absent
  int workers() const;
  std::string output_dir() const;

  bool has(const std::string& dotted_path) const;
  double number(const std::string& dotted_path) const;
  double number_or(const std::string& dotted_path, double fallback) const;
  std::int64_t integer_or(const std::string& dotted_path, std::int64_t fallback) const;
  std::string string_or(const std::string& dotted_path, const std::string& fallback) const;
  bool flag_or(const std::string& dotted_path, bool fallback) const;
  std::vector<double> numbers(const std::string& dotted_path) const;
  std::vector<double> numbers_or(const std::string& dotted_path,
                                 std::vector<double> fallback) const;

  NoiseSpec noise() const;          // from the "noise" block
  GridSpec grid() const;            // from the "grid" block
  InitialCondition u0() const;      // from the "u0" block (default constant_one)
  McParams mc() const;              // from the "mc" block; seed = master_seed

  // Runs every block parser relevant to `command` and returns the full list
  // of validation errors (empty = valid).
  std::vector<std::string> validate(const std::string& command) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace pam

#endif
