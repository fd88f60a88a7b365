#include "cflow/real_fft.hpp"

#include <algorithm>
#include <cstring>
#include <new>

#include <fftw3.h>

namespace cflow {

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

namespace {

// Aligned scratch owned by the calling thread; FFTW new-array execution
// requires the same alignment the plans were created with.
struct Scratch {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  std::size_t real_len = 0;
  std::size_t spec_len = 0;

  ~Scratch() {
    fftw_free(real);
    fftw_free(spec);
  }

  void reserve(std::size_t n, std::size_t m) {
    if (real_len < n) {
      fftw_free(real);
      real = static_cast<double*>(fftw_malloc(sizeof(double) * n));
      real_len = n;
    }
    if (spec_len < m) {
      fftw_free(spec);
      spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
      spec_len = m;
    }
    if (real == nullptr || spec == nullptr) throw std::bad_alloc();
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

RealFft::RealFft(std::size_t length) : length_(length), plans_(std::make_unique<Plans>()) {
  auto& s = scratch();
  s.reserve(length_, spectrum_size());
  const int n = static_cast<int>(length_);
  plans_->forward = fftw_plan_dft_r2c_1d(n, s.real, s.spec, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_c2r_1d(n, s.spec, s.real, FFTW_ESTIMATE);
  if (plans_->forward == nullptr || plans_->backward == nullptr) throw std::bad_alloc();
}

RealFft::~RealFft() {
  if (plans_) {
    fftw_destroy_plan(plans_->forward);
    fftw_destroy_plan(plans_->backward);
  }
}

void RealFft::forward(std::span<const double> input, std::span<std::complex<double>> spectrum) const {
  auto& s = scratch();
  s.reserve(length_, spectrum_size());
  std::copy_n(input.begin(), length_, s.real);
  fftw_execute_dft_r2c(plans_->forward, s.real, s.spec);
  for (std::size_t k = 0; k < spectrum_size(); ++k) spectrum[k] = {s.spec[k][0], s.spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> spectrum, std::span<double> output) const {
  auto& s = scratch();
  s.reserve(length_, spectrum_size());
  for (std::size_t k = 0; k < spectrum_size(); ++k) {
    s.spec[k][0] = spectrum[k].real();
    s.spec[k][1] = spectrum[k].imag();
  }
  fftw_execute_dft_c2r(plans_->backward, s.spec, s.real);
  const double scale = 1.0 / static_cast<double>(length_);
  for (std::size_t j = 0; j < length_; ++j) output[j] = s.real[j] * scale;
}

}  // namespace cflow
