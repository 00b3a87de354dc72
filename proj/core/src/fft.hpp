#ifndef PAM_SRC_FFT_HPP
#define PAM_SRC_FFT_HPP

#include <complex>
#include <vector>

namespace pam {

// Real<->complex FFT on an N (d=1) or N x N (d=2) periodic grid, wrapping
// FFTW with half-spectrum layout (last axis keeps N/2+1 modes). Plan
// creation is serialized behind a global mutex; execution is not, so each
// worker thread should own its instance.
class RealFft {
 public:
  RealFft(int d, int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int dim() const { return d_; }
  int n() const { return n_; }
  int real_size() const { return real_size_; }
  int spectral_size() const { return spectral_size_; }

  // out_j = sum_k spec_k exp(+i 2 pi j.k / N); spec is left untouched.
  void inverse(std::complex<double>* spec, double* out);
  // spec_k = sum_j in_j exp(-i 2 pi j.k / N).
  void forward(const double* in, std::complex<double>* spec);

 private:
  int d_, n_, real_size_, spectral_size_;
  void* plan_c2r_;
  void* plan_r2c_;
  std::vector<std::complex<double>> spec_buf_;
  std::vector<double> real_buf_;
};

}  // namespace pam

#endif
