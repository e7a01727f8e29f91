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

#ifndef ASR_SPECTROGRAM_HPP_
#define ASR_SPECTROGRAM_HPP_

#include <string>
#include <vector>

#include "asr/audio_io.hpp"
#include "asr/matrix.hpp"

namespace asr {

enum class WindowKind { kHann, kRectangular };

struct SpectrogramParams {
  int fft_size = 256;  // power of two
  int hop = 64;
  WindowKind window = WindowKind::kHann;
  double db_reference = 1.0;

  void Validate() const;
};

std::vector<double> MakeWindow(WindowKind kind, int size);

struct Spectrogram {
  MatrixD power;  // [n_frames x n_bins]
  double time_step_s = 0.0;
  double freq_step_hz = 0.0;
  double sample_rate_hz = 0.0;
  SpectrogramParams params;
  // Time of sample 0 of frame 0.
  double origin_time_s = 0.0;

  std::size_t n_frames() const { return power.rows(); }
  std::size_t n_bins() const { return power.cols(); }

  // Time covered by a frame index, centred on the frame's window.
  double FrameCenterTime(double frame) const;
  // Tight time interval of frames [f0, f1]: half a hop either side of the
  // first/last frame centre.
  double FrameSpanStart(std::size_t frame) const;
  double FrameSpanEnd(std::size_t frame) const;
  double BinFrequency(double bin) const { return bin * freq_step_hz; }
  // Index of the frame whose centre is nearest to t (clamped).
  std::size_t NearestFrame(double t_s) const;
  // Inclusive bin range for [f_lo, f_hi]; empty (lo > hi) when no bin centre
  // lies inside the band.
  std::pair<std::size_t, std::size_t> BinRange(double f_lo_hz,
                                               double f_hi_hz) const;

  // Same geometry, different values.
  Spectrogram WithPower(MatrixD values) const;
};

struct BinaryMask {
  MaskMatrix bits;  // aligned with a Spectrogram's power
  std::string provenance;

  std::size_t count() const;
};

// Frame t covers samples [t*hop, t*hop + fft_size); power is |DFT|^2 of the
// windowed frame, one-sided (fft_size/2 + 1 bins).
Spectrogram Stft(const AudioClip& clip, const SpectrogramParams& params);

struct DenoiseStats {
  // Pixels whose background estimate was zero; left unchanged.
  std::size_t degenerate_pixels = 0;
};

// Divides every pixel by the running median of its frequency bin over
// noise_window_frames neighbouring frames (current frame excluded) and raises
// the ratio to nu.
Spectrogram PowerLawDenoise(const Spectrogram& spec, double nu,
                            int noise_window_frames,
                            DenoiseStats* stats = nullptr);

// Per-bin mean removal in the log domain followed by a global rescale to
// [0, 1]. A constant input yields all zeros.
Spectrogram NormalizeEqualize(const Spectrogram& spec);

enum class ThresholdMode { kGlobalPercentile, kPerBinPercentile };

// Linear-interpolation percentile (numpy's default definition).
double Percentile(std::vector<double> values, double p);

// Bit set iff the value is strictly above the percentile threshold.
BinaryMask Binarize(const Spectrogram& spec, ThresholdMode mode,
                    double percentile);

// Plain-text dumps for inspection.
std::string SpectrogramToCsv(const Spectrogram& spec);
// 8-bit binary PGM, frequency increasing upwards, log-scaled.
std::string SpectrogramToPgm(const Spectrogram& spec);

}  // namespace asr

#endif  // ASR_SPECTROGRAM_HPP_
