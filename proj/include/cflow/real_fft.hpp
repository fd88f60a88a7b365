#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace cflow {

// Unnormalized real <-> half-complex transform of fixed length, backed by FFTW.
// Plans are created once (FFTW_ESTIMATE) and executed on aligned scratch
// buffers, so repeated calls on identical input are bit-identical.
class RealFft {
 public:
  explicit RealFft(std::size_t length);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t length() const noexcept { return length_; }
  std::size_t spectrum_size() const noexcept { return length_ / 2 + 1; }

  // spectrum[k] = sum_j input[j] exp(-2 pi i j k / N), k = 0..N/2
  void forward(std::span<const double> input, std::span<std::complex<double>> spectrum) const;
  // Inverse of forward() including the 1/N factor.
  void inverse(std::span<const std::complex<double>> spectrum, std::span<double> output) const;

 private:
  struct Plans;
  std::size_t length_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace cflow
