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

#include "asr/pulsetrain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "asr/error.hpp"

namespace asr {

namespace {

std::pair<std::size_t, std::size_t> BandBins(const Spectrogram& geometry, double f_lo_hz,
                                             double f_hi_hz) {
  Require(f_lo_hz >= 0 && f_lo_hz < f_hi_hz, "band must satisfy 0 <= f_lo < f_hi");
  Require(f_lo_hz <= geometry.sample_rate_hz / 2, "band lies above the Nyquist frequency");
  const auto range = geometry.BinRange(f_lo_hz, f_hi_hz);
  Require(range.first <= range.second, "no frequency bin lies inside the band");
  return range;
}

}  // namespace

std::vector<double> EnergyProjection(const Spectrogram& spec, double f_lo_hz, double f_hi_hz) {
  const auto [lo, hi] = BandBins(spec, f_lo_hz, f_hi_hz);
  std::vector<double> out(spec.n_frames(), 0.0);
  for (std::size_t t = 0; t < spec.n_frames(); ++t) {
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += spec.power(t, k);
    out[t] = s;
  }
  return out;
}

std::vector<double> EnergyProjection(const BinaryMask& mask, const Spectrogram& geometry,
                                     double f_lo_hz, double f_hi_hz) {
  Require(mask.bits.rows() == geometry.n_frames() && mask.bits.cols() == geometry.n_bins(),
          "mask and spectrogram dimensions differ");
  const auto [lo, hi] = BandBins(geometry, f_lo_hz, f_hi_hz);
  std::vector<double> out(mask.bits.rows(), 0.0);
  for (std::size_t t = 0; t < mask.bits.rows(); ++t) {
    std::size_t c = 0;
    for (std::size_t k = lo; k <= hi; ++k) c += mask.bits(t, k) ? 1 : 0;
    out[t] = static_cast<double>(c);
  }
  return out;
}

namespace {

// Peak indices (plateau left-middle), edges excluded.
std::vector<std::size_t> LocalMaxima(const std::vector<double>& x) {
  std::vector<std::size_t> peaks;
  const std::size_t n = x.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (x[i - 1] < x[i]) {
      std::size_t ahead = i + 1;
      while (ahead + 1 < n && x[ahead] == x[i]) ++ahead;
      if (x[ahead] < x[i]) {
        peaks.push_back((i + ahead - 1) / 2);
        i = ahead;
        continue;
      }
    }
    ++i;
  }
  return peaks;
}

struct PeakShape {
  double prominence = 0.0;
  std::size_t left_base = 0;
  std::size_t right_base = 0;
};

PeakShape Shape(const std::vector<double>& x, std::size_t peak) {
  PeakShape s;
  double left_min = x[peak];
  s.left_base = peak;
  for (std::size_t i = peak + 1; i-- > 0;) {
    if (x[i] > x[peak]) break;
    if (x[i] < left_min) {
      left_min = x[i];
      s.left_base = i;
    }
  }
  double right_min = x[peak];
  s.right_base = peak;
  for (std::size_t i = peak; i < x.size(); ++i) {
    if (x[i] > x[peak]) break;
    if (x[i] < right_min) {
      right_min = x[i];
      s.right_base = i;
    }
  }
  s.prominence = x[peak] - std::max(left_min, right_min);
  return s;
}

// Width in samples at half prominence, interpolated, clipped to the bases.
double HalfWidth(const std::vector<double>& x, std::size_t peak, const PeakShape& s) {
  const double height = x[peak] - s.prominence / 2.0;
  std::size_t i = peak;
  while (i > s.left_base && x[i] > height) --i;
  double left = static_cast<double>(i);
  if (x[i] < height) left += (height - x[i]) / (x[i + 1] - x[i]);
  std::size_t j = peak;
  while (j < s.right_base && x[j] > height) ++j;
  double right = static_cast<double>(j);
  if (x[j] < height) right -= (height - x[j]) / (x[j - 1] - x[j]);
  return right - left;
}

}  // namespace

std::vector<double> PeakProminences(const std::vector<double>& series) {
  std::vector<double> out(series.size(), 0.0);
  for (std::size_t p : LocalMaxima(series)) out[p] = Shape(series, p).prominence;
  return out;
}

std::vector<Pulse> DetectPulses(const std::vector<double>& series, double time_step_s,
                                double origin_time_s, double min_prominence,
                                double min_separation_s) {
  Require(!series.empty(), "pulse detection needs a nonempty series");
  Require(time_step_s > 0, "time step must be positive");
  Require(min_separation_s >= 0, "minimum separation must be nonnegative");
  struct Candidate {
    std::size_t index;
    PeakShape shape;
  };
  std::vector<Candidate> cands;
  for (std::size_t p : LocalMaxima(series)) {
    const PeakShape s = Shape(series, p);
    if (s.prominence > 0 && s.prominence >= min_prominence) cands.push_back({p, s});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.shape.prominence > b.shape.prominence;
  });
  std::vector<Pulse> kept;
  for (const Candidate& c : cands) {
    const double t = origin_time_s + static_cast<double>(c.index) * time_step_s;
    bool clear = true;
    for (const Pulse& k : kept) clear &= std::abs(k.time_s - t) >= min_separation_s;
    if (!clear) continue;
    Pulse p;
    p.time_s = t;
    p.frame = c.index;
    p.strength = c.shape.prominence;
    p.width_s = HalfWidth(series, c.index, c.shape) * time_step_s;
    kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Pulse& a, const Pulse& b) { return a.time_s < b.time_s; });
  return kept;
}

void TrainParams::Validate() const {
  Require(ipi_min_s > 0 && ipi_min_s < ipi_max_s, "IPI range must satisfy 0 < min < max");
  Require(ipi_tol_cv >= 0, "IPI tolerance must be nonnegative");
  Require(min_count >= 3, "a train needs at least three pulses");
}

double CoefficientOfVariation(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (mean == 0.0) return 0.0;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size())) / std::abs(mean);
}

namespace {

PulseTrain FinishTrain(std::vector<Pulse> pulses) {
  PulseTrain t;
  std::vector<double> ipis;
  for (std::size_t i = 1; i < pulses.size(); ++i) {
    ipis.push_back(pulses[i].time_s - pulses[i - 1].time_s);
  }
  t.ipi_mean_s = std::accumulate(ipis.begin(), ipis.end(), 0.0) / static_cast<double>(ipis.size());
  t.ipi_cv = CoefficientOfVariation(ipis);
  t.t0_s = pulses.front().time_s - pulses.front().width_s / 2.0;
  t.t1_s = pulses.back().time_s + pulses.back().width_s / 2.0;
  t.pulses = std::move(pulses);
  return t;
}

}  // namespace

std::vector<PulseTrain> GroupTrains(std::vector<Pulse> pulses, const TrainParams& params) {
  params.Validate();
  std::sort(pulses.begin(), pulses.end(), [](const Pulse& a, const Pulse& b) {
    return std::tie(a.time_s, a.strength, a.width_s) < std::tie(b.time_s, b.strength, b.width_s);
  });
  const std::size_t n = pulses.size();
  std::vector<char> used(n, 0);
  std::vector<PulseTrain> trains;
  double last_train_end = -1e300;
  for (std::size_t s = 0; s < n; ++s) {
    if (used[s]) continue;
    if (pulses[s].time_s <= last_train_end) {
      used[s] = 1;
      continue;
    }
    std::vector<std::size_t> chain{s};
    std::vector<double> ipis;
    for (;;) {
      const Pulse& last = pulses[chain.back()];
      bool extended = false;
      for (std::size_t c = chain.back() + 1; c < n; ++c) {
        const double gap = pulses[c].time_s - last.time_s;
        if (gap > params.ipi_max_s) break;
        if (used[c] || gap < params.ipi_min_s) continue;
        ipis.push_back(gap);
        if (CoefficientOfVariation(ipis) <= params.ipi_tol_cv) {
          chain.push_back(c);
          extended = true;
          break;
        }
        ipis.pop_back();
      }
      if (!extended) break;
    }
    used[s] = 1;
    if (chain.size() < static_cast<std::size_t>(params.min_count)) continue;
    std::vector<Pulse> members;
    for (std::size_t i : chain) {
      used[i] = 1;
      members.push_back(pulses[i]);
    }
    trains.push_back(FinishTrain(std::move(members)));
    last_train_end = trains.back().pulses.back().time_s;
  }
  return trains;
}

FeatureVector TrainFeatures(const PulseTrain& train) {
  Require(train.pulses.size() >= 2, "a train needs at least two pulses");
  std::vector<double> strengths;
  for (const Pulse& p : train.pulses) strengths.push_back(p.strength);
  const double mean_strength =
      std::accumulate(strengths.begin(), strengths.end(), 0.0) / static_cast<double>(strengths.size());
  FeatureVector f;
  f.fingerprint = kTrainFeatureFingerprint;
  f.values = {static_cast<double>(train.pulses.size()),
              train.ipi_mean_s,
              train.ipi_cv,
              train.t1_s - train.t0_s,
              mean_strength,
              CoefficientOfVariation(strengths),
              (train.f_lo_hz + train.f_hi_hz) / 2.0,
              train.f_hi_hz - train.f_lo_hz};
  return f;
}

}  // namespace asr
