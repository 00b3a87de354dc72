#include "pam/noise_spec.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pam {

double NoiseSpec::alpha_sum() const {
  if (regime == SpaceRegime::I)
    return std::accumulate(alphas.begin(), alphas.end(), 0.0);
  return alpha_ii;
}

NoiseSpec NoiseSpec::white_preset(int d) {
  NoiseSpec s;
  s.time_mode = TimeMode::White;
  s.alpha0 = 1.0;
  s.regime = SpaceRegime::I;
  s.alphas.assign(static_cast<std::size_t>(d), 0.0);
  s.amplitude = std::pow(2.0 * M_PI, -d);
  return s;
}

NoiseSpec NoiseSpec::regime_i(std::vector<double> alphas, TimeMode tm, double a0,
                              double amplitude) {
  NoiseSpec s;
  s.time_mode = tm;
  s.alpha0 = tm == TimeMode::White ? 1.0 : a0;
  s.regime = SpaceRegime::I;
  s.alphas = std::move(alphas);
  s.amplitude = amplitude;
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::regime_ii(double alpha, TimeMode tm, double a0, double amplitude) {
  NoiseSpec s;
  s.time_mode = tm;
  s.alpha0 = tm == TimeMode::White ? 1.0 : a0;
  s.regime = SpaceRegime::II;
  s.alpha_ii = alpha;
  s.amplitude = amplitude;
  s.validate();
  return s;
}

bool NoiseSpec::is_space_time_white() const {
  if (time_mode != TimeMode::White || regime != SpaceRegime::I) return false;
  if (alphas.size() != 1) return false;
  return alphas[0] == 0.0;
}

void NoiseSpec::validate() const {
  std::ostringstream err;
  if (time_mode == TimeMode::Riesz) {
    if (!(alpha0 > 0.0 && alpha0 < 1.0))
      err << "noise.alpha0 must lie in (0,1) for riesz time (got " << alpha0 << "); ";
  } else if (alpha0 != 1.0) {
    err << "noise.alpha0 must equal 1 in white time mode; ";
  }
  if (!(amplitude >= 0.0)) err << "noise.amplitude must be >= 0; ";
  if (regime == SpaceRegime::I) {
    if (alphas.empty()) err << "noise.alphas must be non-empty in regime i; ";
    if (alphas.size() > 2) err << "noise dimension must be 1 or 2; ";
    for (double a : alphas)
      if (!(a > -1.0 && a <= 0.0))
        err << "noise.alphas entries must lie in (-1,0] (got " << a << "); ";
  } else {
    if (!(alpha_ii > 0.0 && alpha_ii < 1.5))
      err << "noise.alpha must lie in (0, 3/2) in regime ii (got " << alpha_ii << "); ";
  }
  const std::string msg = err.str();
  if (!msg.empty()) throw std::invalid_argument("invalid NoiseSpec: " + msg);
}

void NoiseSpec::validate_hypothesis() const {
  validate();
  std::ostringstream err;
  const double a0 = effective_alpha0();
  if (regime == SpaceRegime::I) {
    if (!(2.0 * a0 + alpha_sum() < 4.0))
      err << "regime i requires 2*alpha0 + alpha < 4 (got " << 2.0 * a0 + alpha_sum()
          << "); ";
  } else {
    if (!(alpha_ii + a0 < 1.5))
      err << "regime ii requires alpha + alpha0 < 3/2 (got " << alpha_ii + a0 << "); ";
  }
  const std::string msg = err.str();
  if (!msg.empty()) throw std::invalid_argument("invalid NoiseSpec: " + msg);
}

}  // namespace pam
