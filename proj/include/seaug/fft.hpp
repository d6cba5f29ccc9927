// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "seaug/error.hpp"

namespace seaug {

namespace detail {
// FFTW's planner is not thread-safe; execution on private buffers is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// Real-to-complex FFT of a fixed (arbitrary, not necessarily power-of-two)
// size. Each instance owns its buffers and plans, so distinct instances may
// be used from distinct threads concurrently; a single instance may not.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    if (n <= 0) throw Error("RealFft: size must be positive");
    real_ = fftw_alloc_real(static_cast<std::size_t>(n_));
    cplx_ = fftw_alloc_complex(static_cast<std::size_t>(bins()));
    if (!real_ || !cplx_) throw Error("RealFft: allocation failed");
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(n_, real_, cplx_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(n_, cplx_, real_, FFTW_ESTIMATE);
    if (!fwd_ || !inv_) throw Error("RealFft: planning failed");
  }

  ~RealFft() {
    {
      std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(inv_);
    }
    fftw_free(real_);
    fftw_free(cplx_);
  }

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  int bins() const { return n_ / 2 + 1; }

  // in: n() reals; out: bins() complex values (unnormalized).
  void forward(const double* in, std::complex<double>* out) {
    for (int i = 0; i < n_; ++i) real_[i] = in[i];
    fftw_execute(fwd_);
    for (int k = 0; k < bins(); ++k)
      out[k] = std::complex<double>(cplx_[k][0], cplx_[k][1]);
  }

  // in: bins() complex values; out: n() reals, scaled by 1/n so that
  // inverse(forward(x)) == x.
  void inverse(const std::complex<double>* in, double* out) {
    for (int k = 0; k < bins(); ++k) {
      cplx_[k][0] = in[k].real();
      cplx_[k][1] = in[k].imag();
    }
    fftw_execute(inv_);
    const double scale = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[i] = real_[i] * scale;
  }

  std::vector<std::complex<double>> forward(const std::vector<double>& in) {
    if (static_cast<int>(in.size()) != n_)
      throw Error("RealFft::forward: length mismatch");
    std::vector<std::complex<double>> out(static_cast<std::size_t>(bins()));
    forward(in.data(), out.data());
    return out;
  }

  std::vector<double> inverse(const std::vector<std::complex<double>>& in) {
    if (static_cast<int>(in.size()) != bins())
      throw Error("RealFft::inverse: length mismatch");
    std::vector<double> out(static_cast<std::size_t>(n_));
    inverse(in.data(), out.data());
    return out;
  }

 private:
  int n_;
  double* real_ = nullptr;
  fftw_complex* cplx_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

}  // namespace seaug
