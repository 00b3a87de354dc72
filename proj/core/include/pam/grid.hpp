#ifndef PAM_GRID_HPP
#define PAM_GRID_HPP

#include <vector>

namespace pam {

// Periodic spatial grid plus uniform time stepping.
//
// Constraints enforced by validate():
//   d in {1, 2}; N a power of two, N >= 64; dt <= T/100; L > 8*sqrt(T)
// (the last keeps heat-kernel wraparound mass negligible at horizon T),
// and T an integer multiple of dt.
struct GridSpec {
  int d = 1;
  double L = 8.0;
  int N = 64;
  double dt = 1e-3;
  double T = 0.1;

  int points() const;                 // N^d
  double dx() const { return L / N; }
  int steps() const;                  // T / dt, validated integral
  std::vector<double> axis_coords() const;  // x_j = -L/2 + j*dx

  // Throws std::invalid_argument listing every violated constraint.
  void validate() const;
};

bool is_power_of_two(int n);

}  // namespace pam

#endif
