#ifndef PAM_NOISE_SPEC_HPP
#define PAM_NOISE_SPEC_HPP

#include <vector>

namespace pam {

enum class TimeMode { White, Riesz };
enum class SpaceRegime { I, II };

// Covariance model of the driving Gaussian noise.
//
// Time: either white (independent increments; recorded as alpha0 = 1 in
// every bound formula) or a Riesz kernel |tau|^{-alpha0}, alpha0 in (0,1).
//
// Space, regime I: spectral density amplitude * prod_i |xi_i|^{alpha_i}
// with every alpha_i in (-1, 0]; requires 2*alpha0 + sum(alpha_i) < 4.
//
// Space, regime II: d = 1 and density amplitude * |xi|^alpha with
// alpha in (0, 3/2); requires alpha + alpha0 < 3/2.
struct NoiseSpec {
  TimeMode time_mode = TimeMode::White;
  double alpha0 = 1.0;  // 1.0 whenever time_mode == White
  SpaceRegime regime = SpaceRegime::I;
  std::vector<double> alphas;  // regime I, one exponent per axis
  double alpha_ii = 0.0;       // regime II exponent
  double amplitude = 1.0;

  int dim() const { return regime == SpaceRegime::I ? static_cast<int>(alphas.size()) : 1; }
  double alpha_sum() const;     // sum(alpha_i) or alpha_ii
  double effective_alpha0() const { return time_mode == TimeMode::White ? 1.0 : alpha0; }

  // White in time with a flat spatial spectrum; amplitude (2*pi)^-d makes
  // the noise inner product coincide with the space-time L2 inner product
  // (i.e. standard space-time white noise).
  static NoiseSpec white_preset(int d);
  static NoiseSpec regime_i(std::vector<double> alphas, TimeMode tm, double a0,
                            double amplitude = 1.0);
  static NoiseSpec regime_ii(double alpha, TimeMode tm, double a0,
                             double amplitude = 1.0);

  // Flat regime-I spectrum + white time in d = 1: the space-time white case.
  bool is_space_time_white() const;

  // Field ranges only (exponent intervals, amplitude, dimension). Synthesis
  // needs nothing more: any spectral density in range has a well-defined
  // discrete field.
  void validate() const;  // throws std::invalid_argument with all violations

  // Adds the joint solution-existence constraints (2*alpha0 + alpha < 4 in
  // regime i, alpha + alpha0 < 3/2 in regime ii). Required by the solver and
  // the chaos machinery, not by covariance synthesis/validation.
  void validate_hypothesis() const;
};

}  // namespace pam

#endif
