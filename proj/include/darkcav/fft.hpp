#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "darkcav/error.hpp"

namespace darkcav::fft {

// FFTW's planner is not reentrant; execution on distinct arrays is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place unnormalized 2-D complex DFT on an n x n row-major array.
class Dft2d {
 public:
  explicit Dft2d(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> probe(n * n);
    auto* p = reinterpret_cast<fftw_complex*>(probe.data());
    std::scoped_lock lock(planner_mutex());
    const int ni = static_cast<int>(n);
    fwd_ = fftw_plan_dft_2d(ni, ni, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_2d(ni, ni, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) throw Error(ErrorCode::InvalidArgument, "FFTW planning failed");
  }
  Dft2d(const Dft2d&) = delete;
  Dft2d& operator=(const Dft2d&) = delete;
  ~Dft2d() {
    std::scoped_lock lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  std::size_t size() const { return n_; }

  /// sum_j x_j exp(-2 pi i jk / n) along both axes.
  void forward(std::vector<std::complex<double>>& data) const { run(fwd_, data); }
  /// sum_k x_k exp(+2 pi i jk / n), no 1/n^2.
  void backward(std::vector<std::complex<double>>& data) const { run(bwd_, data); }

 private:
  void run(fftw_plan plan, std::vector<std::complex<double>>& data) const {
    if (data.size() != n_ * n_) throw Error(ErrorCode::InvalidArgument, "DFT size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
  }

  std::size_t n_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

/// In-place 2-D DST-I (FFTW RODFT00) applied to the real and imaginary parts
/// of an n x n complex array: Y_kl = 4 sum_ij X_ij sin(pi (i+1)(k+1)/(n+1)) sin(pi (j+1)(l+1)/(n+1)).
/// Applying it twice multiplies by (2 (n + 1))^2.
class Dst2d {
 public:
  explicit Dst2d(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> probe(n * n);
    auto* p = reinterpret_cast<double*>(probe.data());
    const int dims[2] = {static_cast<int>(n), static_cast<int>(n)};
    const fftw_r2r_kind kinds[2] = {FFTW_RODFT00, FFTW_RODFT00};
    std::scoped_lock lock(planner_mutex());
    // two interleaved real transforms: stride 2, distance 1
    plan_ = fftw_plan_many_r2r(2, dims, 2, p, nullptr, 2, 1, p, nullptr, 2, 1, kinds,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw Error(ErrorCode::InvalidArgument, "FFTW planning failed");
  }
  Dst2d(const Dst2d&) = delete;
  Dst2d& operator=(const Dst2d&) = delete;
  ~Dst2d() {
    std::scoped_lock lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }

  std::size_t size() const { return n_; }

  void transform(std::vector<std::complex<double>>& data) const {
    if (data.size() != n_ * n_) throw Error(ErrorCode::InvalidArgument, "DST size mismatch");
    auto* p = reinterpret_cast<double*>(data.data());
    fftw_execute_r2r(plan_, p, p);
  }

 private:
  std::size_t n_;
  fftw_plan plan_ = nullptr;
};

}  // namespace darkcav::fft
