#ifndef PAM_RNG_HPP
#define PAM_RNG_HPP

#include <array>
#include <cstdint>

namespace pam {

// splitmix64 step; used to expand seeds into full generator state.
std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256++ with an explicit, platform-independent Gaussian sampler.
// Every stream is a pure function of its seed, so ensembles stay
// reproducible regardless of thread count or scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for one replica of an ensemble. Streams derived
  // from the same master seed but different indices do not overlap in
  // any practical sense (distinct splitmix64 trajectories).
  static Rng for_replica(std::uint64_t master_seed, std::uint64_t replica);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  double uniform(double a, double b);

  // Standard normal via the polar method (no libm distribution objects,
  // so sequences are identical across standard libraries).
  double normal();

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pam

#endif
