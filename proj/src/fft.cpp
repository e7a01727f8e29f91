// Copyright 2026 The asr-dcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace asr::internal {

namespace {

std::mutex& PlanMutex() {
  static std::mutex m;
  return m;
}

// Plans are cached for the lifetime of the process, keyed by (size, dir).
fftw_plan GetPlan(std::size_t n, bool forward) {
  static std::map<std::pair<std::size_t, bool>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(PlanMutex());
  auto it = cache.find({n, forward});
  if (it != cache.end()) return it->second;
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  fftw_plan p = forward
                    ? fftw_plan_dft_r2c_1d(static_cast<int>(n), r, c, FFTW_ESTIMATE)
                    : fftw_plan_dft_c2r_1d(static_cast<int>(n), c, r, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
  cache.emplace(std::make_pair(n, forward), p);
  return p;
}

}  // namespace

std::vector<std::complex<double>> RealForward(const std::vector<double>& x) {
  const std::size_t n = x.size();
  fftw_plan plan = GetPlan(n, true);
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  std::copy(x.begin(), x.end(), r);
  fftw_execute_dft_r2c(plan, r, c);
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {c[k][0], c[k][1]};
  fftw_free(r);
  fftw_free(c);
  return out;
}

std::vector<double> RealInverse(const std::vector<std::complex<double>>& spectrum,
                                std::size_t n) {
  fftw_plan plan = GetPlan(n, false);
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    c[k][0] = spectrum[k].real();
    c[k][1] = spectrum[k].imag();
  }
  fftw_execute_dft_c2r(plan, c, r);
  std::vector<double> out(r, r + n);
  for (double& v : out) v /= static_cast<double>(n);
  fftw_free(r);
  fftw_free(c);
  return out;
}

FramePowerFft::FramePowerFft(int n)
    : n_(n),
      in_(fftw_alloc_real(n)),
      out_(fftw_alloc_complex(n / 2 + 1)),
      plan_(GetPlan(static_cast<std::size_t>(n), true)) {}

FramePowerFft::~FramePowerFft() {
  fftw_free(in_);
  fftw_free(out_);
}

void FramePowerFft::Compute(double* power_out) {
  auto* c = static_cast<fftw_complex*>(out_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), in_, c);
  for (int k = 0; k <= n_ / 2; ++k) power_out[k] = c[k][0] * c[k][0] + c[k][1] * c[k][1];
}

}  // namespace asr::internal
