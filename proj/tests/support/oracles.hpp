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

#ifndef ASR_TESTS_ORACLES_HPP_
#define ASR_TESTS_ORACLES_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "asr/classify.hpp"
#include "asr/features.hpp"
#include "asr/matrix.hpp"
#include "asr/roi.hpp"

namespace asr::testing {

// Connected components by explicit stack flood fill. Each component is a
// sorted pixel list; components are sorted by their first pixel.
std::vector<std::vector<Pixel>> FloodFill(const MaskMatrix& mask,
                                          int connectivity);

// |sum_n x[n] w[n] exp(-2 pi i k n / N)|^2 for k = 0..N/2, long double sums.
std::vector<double> NaiveDftPower(const std::vector<double>& frame,
                                  const std::vector<double>& window);

// Per-pixel HOG written independently: each pixel's vote goes to every bin
// through a triangular kernel on the circular angle distance.
std::vector<double> HogReference(const MatrixD& patch, const HogParams& params);

// Central-difference gradient of MlpLossAndGradient's loss.
std::vector<double> MlpNumericGradient(const MlpModel& model,
                                       const MatrixD& x_scaled,
                                       const std::vector<double>& targets,
                                       const std::vector<double>& weights,
                                       double l2, double step);

// Area of the 8- or 4-connected component of {v >= level} containing pixel
// (r, c), for every level 0..255 (0 when the pixel is below the level).
std::vector<std::size_t> ComponentAreasByLevel(
    const Matrix<std::uint8_t>& grey, std::size_t r, std::size_t c,
    int connectivity);

// Prominence of the peak at index i by direct scan: the peak height minus
// the higher of the two minima reached before a strictly higher sample (or
// the series edge) on either side.
double BruteProminence(const std::vector<double>& series, std::size_t i);

MaskMatrix RandomMask(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                      double density);

}  // namespace asr::testing

#endif  // ASR_TESTS_ORACLES_HPP_
