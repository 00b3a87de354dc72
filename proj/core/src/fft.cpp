#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace pam {

namespace {
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

RealFft::RealFft(int d, int n) : d_(d), n_(n) {
  if (d != 1 && d != 2) throw std::invalid_argument("RealFft: d must be 1 or 2");
  real_size_ = d == 1 ? n : n * n;
  spectral_size_ = d == 1 ? n / 2 + 1 : n * (n / 2 + 1);
  spec_buf_.resize(spectral_size_);
  real_buf_.resize(real_size_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto* spec = reinterpret_cast<fftw_complex*>(spec_buf_.data());
  if (d == 1) {
    plan_c2r_ = fftw_plan_dft_c2r_1d(n, spec, real_buf_.data(), FFTW_ESTIMATE);
    plan_r2c_ = fftw_plan_dft_r2c_1d(n, real_buf_.data(), spec, FFTW_ESTIMATE);
  } else {
    plan_c2r_ = fftw_plan_dft_c2r_2d(n, n, spec, real_buf_.data(), FFTW_ESTIMATE);
    plan_r2c_ = fftw_plan_dft_r2c_2d(n, n, real_buf_.data(), spec, FFTW_ESTIMATE);
  }
  if (!plan_c2r_ || !plan_r2c_) throw std::runtime_error("RealFft: FFTW plan creation failed");
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
}

void RealFft::inverse(std::complex<double>* spec, double* out) {
  std::memcpy(spec_buf_.data(), spec, sizeof(std::complex<double>) * spectral_size_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_),
                       reinterpret_cast<fftw_complex*>(spec_buf_.data()), real_buf_.data());
  std::memcpy(out, real_buf_.data(), sizeof(double) * real_size_);
}

void RealFft::forward(const double* in, std::complex<double>* spec) {
  std::memcpy(real_buf_.data(), in, sizeof(double) * real_size_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), real_buf_.data(),
                       reinterpret_cast<fftw_complex*>(spec_buf_.data()));
  std::memcpy(spec, spec_buf_.data(), sizeof(std::complex<double>) * spectral_size_);
}

}  // namespace pam
