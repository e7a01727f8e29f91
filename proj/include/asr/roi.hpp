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

#ifndef ASR_ROI_HPP_
#define ASR_ROI_HPP_

#include <cstdint>
#include <vector>

#include "asr/matrix.hpp"
#include "asr/spectrogram.hpp"

namespace asr {

struct Pixel {
  std::uint32_t frame = 0;
  std::uint32_t bin = 0;
  auto operator<=>(const Pixel&) const = default;
};

struct BBox {
  double t0_s = 0, t1_s = 0, f_lo_hz = 0, f_hi_hz = 0;
  double duration_s() const { return t1_s - t0_s; }
  double bandwidth_hz() const { return f_hi_hz - f_lo_hz; }
};

// A set of spectrogram pixels. Pixels are kept sorted and unique.
struct Region {
  std::vector<Pixel> pixels;
  BBox bbox;
  std::uint32_t frame_min = 0, frame_max = 0, bin_min = 0, bin_max = 0;
  std::size_t area_px = 0;
  double mean_intensity = 0.0;

  std::size_t n_frames() const { return frame_max - frame_min + 1; }
  std::size_t n_bins() const { return bin_max - bin_min + 1; }
  // Boolean image over the pixel bbox, [bin x frame] with row 0 at bin_min.
  MaskMatrix LocalMask() const;
};

// Builds a region from pixels (sorted/deduplicated here), computing the pixel
// extents, bbox and mean intensity against spec.
Region MakeRegion(std::vector<Pixel> pixels, const Spectrogram& spec);

struct MserParams {
  int delta = 5;
  std::size_t min_area_px = 12;
  // 0 means 20% of the spectrogram.
  std::size_t max_area_px = 0;
  double max_variation = 0.5;
  // Nested regions whose areas differ by less than this fraction are
  // considered duplicates; the inner one is dropped.
  double min_diversity = 0.2;
  int connectivity = 8;

  void Validate() const;
};

// Grey levels 0..255 from value ranks (ties share a level). Strictly
// monotone remappings of the input leave the levels unchanged.
Matrix<std::uint8_t> RankQuantize(const MatrixD& values);

// Bright-polarity MSER over the component tree of the rank-quantized
// spectrogram.
std::vector<Region> MserDetect(const Spectrogram& spec,
                               const MserParams& params);

// One region per connected component of set bits (4- or 8-connectivity).
// Regions come out in raster order of their first pixel.
std::vector<Region> ConnectedRegions(const BinaryMask& mask,
                                     const Spectrogram& spec,
                                     int connectivity = 8);

struct RegionBounds {
  double min_duration_s = 0.0;
  double max_duration_s = 1e30;
  double min_bandwidth_hz = 0.0;
  double max_bandwidth_hz = 1e30;
  std::size_t min_area_px = 0;
};

struct MergeGap {
  double dt_s = 0.0;
  double df_hz = 0.0;
};

// Drops regions outside bounds, then merges (transitively) regions whose
// bboxes lie within the gap of one another. Output sorted by t0. The result
// does not depend on input order.
std::vector<Region> FilterMerge(const std::vector<Region>& regions,
                                const RegionBounds& bounds,
                                const MergeGap& gap);

// Bilinear resample of the region's pixel bbox (expanded by pad_frac of its
// extent on each side, clipped) to [out_rows x out_cols]; rows are bins
// (ascending), columns frames. values must share the spectrogram geometry.
MatrixD ExtractPatch(const MatrixD& values, const Region& region,
                     std::size_t out_rows, std::size_t out_cols,
                     double pad_frac);

// Same, for an explicit inclusive pixel window.
MatrixD ResampleWindow(const MatrixD& values, std::size_t frame_lo,
                       std::size_t frame_hi, std::size_t bin_lo,
                       std::size_t bin_hi, std::size_t out_rows,
                       std::size_t out_cols);

}  // namespace asr

#endif  // ASR_ROI_HPP_
