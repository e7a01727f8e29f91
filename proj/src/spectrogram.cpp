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

#include "asr/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"
#include "fft.hpp"

namespace asr {

void SpectrogramParams::Validate() const {
  Require(fft_size >= 2 && (fft_size & (fft_size - 1)) == 0,
          "fft_size must be a power of two");
  Require(hop > 0 && hop <= fft_size, "hop must lie in (0, fft_size]");
}

std::vector<double> MakeWindow(WindowKind kind, int size) {
  std::vector<double> w(size, 1.0);
  if (kind == WindowKind::kHann) {
    for (int n = 0; n < size; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / size);
    }
  }
  return w;
}

double Spectrogram::FrameCenterTime(double frame) const {
  return origin_time_s + (frame * params.hop + params.fft_size / 2.0) / sample_rate_hz;
}

double Spectrogram::FrameSpanStart(std::size_t frame) const {
  return FrameCenterTime(static_cast<double>(frame)) - 0.5 * time_step_s;
}

double Spectrogram::FrameSpanEnd(std::size_t frame) const {
  return FrameCenterTime(static_cast<double>(frame)) + 0.5 * time_step_s;
}

std::size_t Spectrogram::NearestFrame(double t_s) const {
  if (n_frames() == 0) return 0;
  const double f = ((t_s - origin_time_s) * sample_rate_hz - params.fft_size / 2.0) /
                   params.hop;
  const double r = std::round(f);
  if (r <= 0) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(r), n_frames() - 1);
}

std::pair<std::size_t, std::size_t> Spectrogram::BinRange(double f_lo_hz,
                                                          double f_hi_hz) const {
  const double lo = std::max(0.0, std::ceil(f_lo_hz / freq_step_hz - 1e-9));
  const double hi = std::min(static_cast<double>(n_bins()) - 1.0,
                             std::floor(f_hi_hz / freq_step_hz + 1e-9));
  if (hi < lo) return {1, 0};
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

Spectrogram Spectrogram::WithPower(MatrixD values) const {
  Spectrogram out = *this;
  out.power = std::move(values);
  return out;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(bits.data().begin(), bits.data().end(), [](unsigned char b) { return b != 0; }));
}

Spectrogram Stft(const AudioClip& clip, const SpectrogramParams& params) {
  params.Validate();
  Require(clip.sample_rate_hz > 0, "stft: sample rate must be positive");
  const std::size_t n = clip.samples.size();
  const std::size_t fft = static_cast<std::size_t>(params.fft_size);
  if (n < fft) {
    Fail(ErrorCode::kInvalidArgument, "stft: clip of " + std::to_string(n) +
                                          " samples is shorter than one frame (" +
                                          std::to_string(fft) + ")");
  }
  const std::size_t frames = (n - fft) / params.hop + 1;
  const std::size_t bins = fft / 2 + 1;
  const auto window = MakeWindow(params.window, params.fft_size);

  Spectrogram spec;
  spec.power = MatrixD(frames, bins);
  spec.sample_rate_hz = clip.sample_rate_hz;
  spec.time_step_s = params.hop / clip.sample_rate_hz;
  spec.freq_step_hz = clip.sample_rate_hz / params.fft_size;
  spec.params = params;
  spec.origin_time_s = clip.start_time_s;

  internal::FramePowerFft engine(params.fft_size);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = clip.samples.data() + t * params.hop;
    double* in = engine.input();
    for (std::size_t i = 0; i < fft; ++i) in[i] = src[i] * window[i];
    engine.Compute(spec.power.row(t).data());
  }
  return spec;
}

namespace {

// Sorted window of one bin's values with the current frame removed on
// demand.
double MedianExcluding(const std::vector<double>& sorted, double excluded) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), excluded);
  const std::size_t p = static_cast<std::size_t>(it - sorted.begin());
  const std::size_t m = sorted.size() - 1;
  if (m == 0) return 0.0;
  auto at = [&](std::size_t j) { return j < p ? sorted[j] : sorted[j + 1]; };
  if (m % 2 == 1) return at(m / 2);
  return 0.5 * (at(m / 2 - 1) + at(m / 2));
}

}  // namespace

Spectrogram PowerLawDenoise(const Spectrogram& spec, double nu,
                            int noise_window_frames, DenoiseStats* stats) {
  Require(nu > 0, "power-law exponent must be positive");
  Require(noise_window_frames >= 5, "noise window must span at least 5 frames");
  const std::size_t frames = spec.n_frames();
  const std::size_t bins = spec.n_bins();
  Require(frames >= 2, "power-law de-noising needs at least two frames");
  const std::size_t w = std::min<std::size_t>(noise_window_frames, frames);
  const std::size_t half = w / 2;

  MatrixD out(frames, bins);
  std::size_t degenerate = 0;
  std::vector<double> sorted;
  sorted.reserve(w);
  for (std::size_t k = 0; k < bins; ++k) {
    sorted.clear();
    std::size_t lo = 0;
    for (std::size_t t = 0; t < w; ++t) sorted.push_back(spec.power(t, k));
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t t = 0; t < frames; ++t) {
      const std::size_t want =
          std::min(t > half ? t - half : std::size_t{0}, frames - w);
      while (lo < want) {
        const double old_v = spec.power(lo, k);
        sorted.erase(std::lower_bound(sorted.begin(), sorted.end(), old_v));
        const double new_v = spec.power(lo + w, k);
        sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), new_v), new_v);
        ++lo;
      }
      const double v = spec.power(t, k);
      const double bg = MedianExcluding(sorted, v);
      if (bg > 0.0) {
        out(t, k) = std::pow(v / bg, nu);
      } else {
        out(t, k) = v;
        ++degenerate;
      }
    }
  }
  if (stats) stats->degenerate_pixels = degenerate;
  return spec.WithPower(std::move(out));
}

Spectrogram NormalizeEqualize(const Spectrogram& spec) {
  const std::size_t frames = spec.n_frames();
  const std::size_t bins = spec.n_bins();
  Require(frames > 0 && bins > 0, "normalize: empty spectrogram");
  constexpr double kFloor = 1e-30;
  MatrixD l(frames, bins);
  for (std::size_t k = 0; k < bins; ++k) {
    double sum = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      l(t, k) = std::log(std::max(spec.power(t, k), kFloor));
      sum += l(t, k);
    }
    const double mean = sum / static_cast<double>(frames);
    for (std::size_t t = 0; t < frames; ++t) l(t, k) -= mean;
  }
  const auto [mn, mx] = std::minmax_element(l.data().begin(), l.data().end());
  const double lo = *mn;
  const double range = *mx - *mn;
  // Residue of a constant input after mean removal is pure rounding error.
  if (!(range > 1e-9)) return spec.WithPower(MatrixD(frames, bins, 0.0));
  for (double& v : l.data()) v = (v - lo) / range;
  return spec.WithPower(std::move(l));
}

double Percentile(std::vector<double> values, double p) {
  Require(!values.empty(), "percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = p / 100.0 * static_cast<double>(values.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

BinaryMask Binarize(const Spectrogram& spec, ThresholdMode mode, double percentile) {
  Require(percentile > 0.0 && percentile <= 100.0,
          "binarize: percentile must lie in (0, 100]");
  BinaryMask mask;
  mask.bits = MaskMatrix(spec.n_frames(), spec.n_bins(), 0);
  if (mode == ThresholdMode::kGlobalPercentile) {
    const double thr = Percentile(spec.power.data(), percentile);
    for (std::size_t i = 0; i < spec.power.size(); ++i) {
      mask.bits.data()[i] = spec.power.data()[i] > thr ? 1 : 0;
    }
    mask.provenance = "global_percentile:" + FormatDouble(percentile);
  } else {
    std::vector<double> col(spec.n_frames());
    for (std::size_t k = 0; k < spec.n_bins(); ++k) {
      for (std::size_t t = 0; t < spec.n_frames(); ++t) col[t] = spec.power(t, k);
      const double thr = Percentile(col, percentile);
      for (std::size_t t = 0; t < spec.n_frames(); ++t) {
        mask.bits(t, k) = spec.power(t, k) > thr ? 1 : 0;
      }
    }
    mask.provenance = "per_bin_percentile:" + FormatDouble(percentile);
  }
  return mask;
}

std::string SpectrogramToCsv(const Spectrogram& spec) {
  std::string out = "frame_time_s";
  for (std::size_t k = 0; k < spec.n_bins(); ++k) out += "," + FormatDouble(spec.BinFrequency(k));
  out += '\n';
  for (std::size_t t = 0; t < spec.n_frames(); ++t) {
    out += FormatDouble(spec.FrameCenterTime(static_cast<double>(t)));
    for (std::size_t k = 0; k < spec.n_bins(); ++k) out += "," + FormatDouble(spec.power(t, k));
    out += '\n';
  }
  return out;
}

std::string SpectrogramToPgm(const Spectrogram& spec) {
  const std::size_t w = spec.n_frames();
  const std::size_t h = spec.n_bins();
  std::vector<double> l(spec.power.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    l[i] = std::log10(std::max(spec.power.data()[i], 1e-30));
  }
  double mx = l.empty() ? 0.0 : *std::max_element(l.begin(), l.end());
  const double mn = mx - 6.0;  // 60 dB of dynamic range
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  for (std::size_t row = 0; row < h; ++row) {
    const std::size_t k = h - 1 - row;
    for (std::size_t t = 0; t < w; ++t) {
      const double v = std::clamp((l[t * h + k] - mn) / (mx - mn), 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255))));
    }
  }
  return out;
}

}  // namespace asr
