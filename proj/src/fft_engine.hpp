#pragma once

#include <fftw3.h>

#include <complex>
#include <span>

namespace fdkp::detail {

// Owns r2c/c2r plans for one real shape (Ny rows of Nx samples, or 1D when
// Ny == 1). Plans are created with FFTW_ESTIMATE so that the algorithm, and
// therefore every output bit, does not depend on timing measurements.
class FftPlanPair {
 public:
  FftPlanPair(int nx, int ny);
  ~FftPlanPair();
  FftPlanPair(const FftPlanPair&) = delete;
  FftPlanPair& operator=(const FftPlanPair&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t real_size() const;
  std::size_t complex_size() const;

  // Unnormalized transforms. `backward` overwrites its input.
  void forward(const double* in, std::complex<double>* out) const;
  void backward(std::complex<double>* in, double* out) const;

 private:
  int nx_;
  int ny_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

class FftEngine {
 public:
  FftEngine(int nx, int ny);

  const FftPlanPair& base() const { return base_; }
  const FftPlanPair& padded() const { return padded_; }

 private:
  FftPlanPair base_;
  FftPlanPair padded_;
};

}  // namespace fdkp::detail
