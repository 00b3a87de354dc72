#ifndef PAMLAB_TOOLS_SELFTEST_HPP
#define PAMLAB_TOOLS_SELFTEST_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pamlab {

struct CheckRow {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Runs the module oracle battery (deterministic for a given seed).
// Returns the rows; failures are rows with pass == false.
std::vector<CheckRow> run_selftest(std::uint64_t master_seed, bool quick);

std::string selftest_csv(const std::vector<CheckRow>& rows);
void print_selftest(const std::vector<CheckRow>& rows, std::ostream& out);

}  // namespace pamlab

#endif
