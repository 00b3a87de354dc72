#include "pam/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pam {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int GridSpec::points() const {
  int p = 1;
  for (int i = 0; i < d; ++i) p *= N;
  return p;
}

int GridSpec::steps() const {
  return static_cast<int>(std::llround(T / dt));
}

std::vector<double> GridSpec::axis_coords() const {
  std::vector<double> xs(N);
  for (int j = 0; j < N; ++j) xs[j] = -0.5 * L + j * dx();
  return xs;
}

void GridSpec::validate() const {
  std::ostringstream err;
  if (d != 1 && d != 2) err << "grid.d must be 1 or 2 (got " << d << "); ";
  if (!is_power_of_two(N)) err << "grid.N must be a power of two (got " << N << "); ";
  if (N < 64) err << "grid.N must be >= 64 (got " << N << "); ";
  if (!(T > 0.0)) err << "grid.T must be positive; ";
  if (!(dt > 0.0)) err << "grid.dt must be positive; ";
  if (T > 0.0 && dt > 0.0) {
    if (dt > T / 100.0 * (1.0 + 1e-12))
      err << "grid.dt must be <= T/100 (got dt=" << dt << ", T=" << T << "); ";
    const double k = T / dt;
    if (std::abs(k - std::llround(k)) > 1e-9 * k)
      err << "grid.T must be an integer multiple of dt; ";
  }
  if (!(L > 8.0 * std::sqrt(std::max(T, 0.0))))
    err << "grid.L must exceed 8*sqrt(T) (got L=" << L << ", T=" << T << "); ";
  const std::string msg = err.str();
  if (!msg.empty()) throw std::invalid_argument("invalid GridSpec: " + msg);
}

}  // namespace pam
