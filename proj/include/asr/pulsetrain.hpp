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

#ifndef ASR_PULSETRAIN_HPP_
#define ASR_PULSETRAIN_HPP_

#include <vector>

#include "asr/feature_vector.hpp"
#include "asr/spectrogram.hpp"

namespace asr {

struct Pulse {
  double time_s = 0.0;
  double strength = 0.0;
  double width_s = 0.0;
  std::size_t frame = 0;
};

struct PulseTrain {
  std::vector<Pulse> pulses;
  double ipi_mean_s = 0.0;
  double ipi_cv = 0.0;
  double t0_s = 0.0;
  double t1_s = 0.0;
  double f_lo_hz = 0.0;
  double f_hi_hz = 0.0;
  double score = 0.0;
};

// Per-frame sum over the bins whose centre lies in [f_lo, f_hi].
std::vector<double> EnergyProjection(const Spectrogram& spec, double f_lo_hz,
                                     double f_hi_hz);
// Per-frame count of set bits in the band.
std::vector<double> EnergyProjection(const BinaryMask& mask,
                                     const Spectrogram& geometry,
                                     double f_lo_hz, double f_hi_hz);

// Topographic prominence of every sample (0 for non-peaks). A peak is a
// plateau strictly higher than both neighbours; its index is the plateau's
// left-middle sample. Edges are never peaks.
std::vector<double> PeakProminences(const std::vector<double>& series);

// Local maxima with prominence >= min_prominence, kept greedily in
// descending prominence (lower index first on ties) while at least
// min_separation_s from every kept pulse. Width is measured at half
// prominence. Returned in time order.
std::vector<Pulse> DetectPulses(const std::vector<double>& series,
                                double time_step_s, double origin_time_s,
                                double min_prominence,
                                double min_separation_s);

struct TrainParams {
  double ipi_min_s = 0.1;
  double ipi_max_s = 2.0;
  double ipi_tol_cv = 0.25;
  int min_count = 5;

  void Validate() const;
};

// Greedy left-to-right chaining; each pulse joins at most one train.
std::vector<PulseTrain> GroupTrains(std::vector<Pulse> pulses,
                                    const TrainParams& params);

// Population coefficient of variation (0 for fewer than two values or a zero
// mean).
double CoefficientOfVariation(const std::vector<double>& v);

inline constexpr const char* kTrainFeatureFingerprint = "pulse_train:v1";

// [count, ipi_mean, ipi_cv, duration, mean strength, strength cv,
//  band centre, bandwidth]
FeatureVector TrainFeatures(const PulseTrain& train);

}  // namespace asr

#endif  // ASR_PULSETRAIN_HPP_
