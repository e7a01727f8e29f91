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

#ifndef ASR_FEATURES_HPP_
#define ASR_FEATURES_HPP_

#include <cstddef>
#include <string>

#include "asr/feature_vector.hpp"
#include "asr/matrix.hpp"

namespace asr {

std::string GridMaskFingerprint(int rows, int cols);

// Occupancy fraction per cell of a rows x cols partition of the mask,
// row-major. Cells are floor(dim / n) wide; the last row/column of cells
// absorbs the remainder.
FeatureVector GridMaskFeatures(const MaskMatrix& mask, int rows, int cols);

struct HogParams {
  int cell_px = 8;
  int block_cells = 2;
  int n_bins = 9;

  void Validate() const;
};

std::string HogFingerprint(const HogParams& params, std::size_t patch_rows,
                           std::size_t patch_cols);

std::size_t HogLength(const HogParams& params, std::size_t patch_rows,
                      std::size_t patch_cols);

// Dalal-Triggs style HOG: central differences (edge-replicated), unsigned
// orientation measured from the column axis with bin centres at i*180/n,
// magnitude votes split linearly between the two nearest bins, blocks of
// block_cells^2 cells sliding one cell at a time, each block divided by
// sqrt(|v|^2 + 1e-12).
FeatureVector HogFeatures(const MatrixD& patch, const HogParams& params);

}  // namespace asr

#endif  // ASR_FEATURES_HPP_
