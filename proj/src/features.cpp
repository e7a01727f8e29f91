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

#include "asr/features.hpp"

#include <cmath>
#include <numbers>

#include "asr/error.hpp"

namespace asr {

std::string GridMaskFingerprint(int rows, int cols) {
  return "gridmask:" + std::to_string(rows) + "x" + std::to_string(cols);
}

FeatureVector GridMaskFeatures(const MaskMatrix& mask, int rows, int cols) {
  Require(rows >= 1 && cols >= 1, "grid dimensions must be positive");
  const std::size_t r_total = mask.rows();
  const std::size_t c_total = mask.cols();
  Require(r_total >= static_cast<std::size_t>(rows) && c_total >= static_cast<std::size_t>(cols),
          "mask (" + std::to_string(r_total) + "x" + std::to_string(c_total) +
              ") is smaller than the grid (" + std::to_string(rows) + "x" +
              std::to_string(cols) + ")");
  const std::size_t ch = r_total / static_cast<std::size_t>(rows);
  const std::size_t cw = c_total / static_cast<std::size_t>(cols);
  FeatureVector out;
  out.fingerprint = GridMaskFingerprint(rows, cols);
  out.values.reserve(static_cast<std::size_t>(rows * cols));
  for (int i = 0; i < rows; ++i) {
    const std::size_t r0 = i * ch;
    const std::size_t r1 = i == rows - 1 ? r_total : r0 + ch;
    for (int j = 0; j < cols; ++j) {
      const std::size_t c0 = j * cw;
      const std::size_t c1 = j == cols - 1 ? c_total : c0 + cw;
      std::size_t set = 0;
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) set += mask(r, c) ? 1 : 0;
      }
      out.values.push_back(static_cast<double>(set) / static_cast<double>((r1 - r0) * (c1 - c0)));
    }
  }
  return out;
}

void HogParams::Validate() const {
  Require(cell_px >= 1, "HOG cell size must be positive");
  Require(block_cells >= 1, "HOG block size must be positive");
  Require(n_bins >= 2, "HOG needs at least two orientation bins");
}

std::string HogFingerprint(const HogParams& params, std::size_t patch_rows,
                           std::size_t patch_cols) {
  return "hog:c" + std::to_string(params.cell_px) + ":b" + std::to_string(params.block_cells) +
         ":n" + std::to_string(params.n_bins) + ":" + std::to_string(patch_rows) + "x" +
         std::to_string(patch_cols);
}

std::size_t HogLength(const HogParams& params, std::size_t patch_rows, std::size_t patch_cols) {
  params.Validate();
  const std::size_t cr = patch_rows / static_cast<std::size_t>(params.cell_px);
  const std::size_t cc = patch_cols / static_cast<std::size_t>(params.cell_px);
  const std::size_t b = static_cast<std::size_t>(params.block_cells);
  if (cr < b || cc < b) return 0;
  return (cr - b + 1) * (cc - b + 1) * b * b * static_cast<std::size_t>(params.n_bins);
}

FeatureVector HogFeatures(const MatrixD& patch, const HogParams& params) {
  params.Validate();
  const std::size_t rows = patch.rows();
  const std::size_t cols = patch.cols();
  const std::size_t cell = static_cast<std::size_t>(params.cell_px);
  const std::size_t ncr = rows / cell;
  const std::size_t ncc = cols / cell;
  const std::size_t bc = static_cast<std::size_t>(params.block_cells);
  Require(rows % cell == 0 && cols % cell == 0,
          "patch " + std::to_string(rows) + "x" + std::to_string(cols) +
              " is not a multiple of the HOG cell size " + std::to_string(cell));
  Require(ncr >= bc && ncc >= bc, "patch " + std::to_string(rows) + "x" + std::to_string(cols) +
                                      " is too small for one HOG block");
  const int nb = params.n_bins;
  const double bin_width = 180.0 / nb;

  std::vector<double> hist(ncr * ncc * static_cast<std::size_t>(nb), 0.0);
  for (std::size_t r = 0; r < ncr * cell; ++r) {
    const std::size_t ru = r == 0 ? 0 : r - 1;
    const std::size_t rd = r + 1 < rows ? r + 1 : r;
    for (std::size_t c = 0; c < ncc * cell; ++c) {
      const std::size_t cl = c == 0 ? 0 : c - 1;
      const std::size_t cr = c + 1 < cols ? c + 1 : c;
      const double gx = patch(r, cr) - patch(r, cl);
      const double gy = patch(rd, c) - patch(ru, c);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;
      const double pos = angle / bin_width;
      const double fl = std::floor(pos);
      const double frac = pos - fl;
      const int b0 = static_cast<int>(fl) % nb;
      const int b1 = (b0 + 1) % nb;
      double* h = &hist[((r / cell) * ncc + c / cell) * static_cast<std::size_t>(nb)];
      h[b0] += mag * (1.0 - frac);
      h[b1] += mag * frac;
    }
  }

  FeatureVector out;
  out.fingerprint = HogFingerprint(params, rows, cols);
  out.values.reserve(HogLength(params, rows, cols));
  std::vector<double> block;
  for (std::size_t br = 0; br + bc <= ncr; ++br) {
    for (std::size_t bcol = 0; bcol + bc <= ncc; ++bcol) {
      block.clear();
      for (std::size_t i = 0; i < bc; ++i) {
        for (std::size_t j = 0; j < bc; ++j) {
          const double* h = &hist[((br + i) * ncc + bcol + j) * static_cast<std::size_t>(nb)];
          block.insert(block.end(), h, h + nb);
        }
      }
      double sq = 0.0;
      for (double v : block) sq += v * v;
      const double norm = std::sqrt(sq + 1e-12);
      for (double v : block) out.values.push_back(v / norm);
    }
  }
  return out;
}

}  // namespace asr
