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

#ifndef ASR_SRC_FFT_HPP_
#define ASR_SRC_FFT_HPP_

#include <complex>
#include <vector>

namespace asr::internal {

// Thin wrappers over FFTW. Plans are created once per size under a lock;
// execution is reentrant.
std::vector<std::complex<double>> RealForward(const std::vector<double>& x);
// Inverse of RealForward for a length-n signal, normalized by 1/n.
std::vector<double> RealInverse(const std::vector<std::complex<double>>& spectrum,
                                std::size_t n);

// Power spectrum |X_k|^2, k = 0..n/2, of one frame; scratch buffers are
// reused across calls by the caller.
class FramePowerFft {
 public:
  explicit FramePowerFft(int n);
  ~FramePowerFft();
  FramePowerFft(const FramePowerFft&) = delete;
  FramePowerFft& operator=(const FramePowerFft&) = delete;

  double* input() { return in_; }
  void Compute(double* power_out);

 private:
  int n_;
  double* in_;
  void* out_;
  void* plan_;
};

}  // namespace asr::internal

#endif  // ASR_SRC_FFT_HPP_
