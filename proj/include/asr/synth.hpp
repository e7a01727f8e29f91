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

#ifndef ASR_SYNTH_HPP_
#define ASR_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "asr/audio_io.hpp"
#include "asr/events.hpp"

namespace asr {

// Linear FM sweep f0 -> f1 under a raised-cosine (Hann) envelope.
AudioClip GenUpcall(double sample_rate_hz, double duration_s, double f0_hz,
                    double f1_hz, double amplitude);

// n pulses, each a Hann-windowed band-pass impulse of pulse_dur_s. Pulse k
// peaks at k * ipi_s in clip time; the clip therefore starts at
// -pulse_dur_s / 2.
AudioClip GenPulseTrain(double sample_rate_hz, double ipi_s, int n_pulses,
                        double pulse_dur_s, double f_lo_hz, double f_hi_hz,
                        double amplitude = 1.0);

enum class NoiseKind { kWhite, kPink, kBandLimited };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kWhite;
  // RMS amplitude of the noise over the full band.
  double level = 0.05;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
};

enum class SceneEventKind { kUpcall, kPulseTrain, kPulse, kTone };

const char* SceneEventKindName(SceneEventKind kind);

struct SceneEvent {
  SceneEventKind kind = SceneEventKind::kUpcall;
  double onset_s = 0.0;
  double snr_db = 10.0;
  // upcall: duration_s, f0_hz, f1_hz
  // pulsetrain / pulse: ipi_s, n_pulses, pulse_dur_s, f_lo_hz, f_hi_hz
  // tone: duration_s, f_hz, fm_depth_hz, fm_rate_hz
  double duration_s = 1.0;
  double f0_hz = 100.0;
  double f1_hz = 200.0;
  double ipi_s = 1.0;
  int n_pulses = 1;
  double pulse_dur_s = 0.1;
  double f_lo_hz = 50.0;
  double f_hi_hz = 400.0;
  double f_hz = 150.0;
  double fm_depth_hz = 0.0;
  double fm_rate_hz = 0.0;
};

struct SceneSpec {
  double duration_s = 60.0;
  double sample_rate_hz = 2000.0;
  NoiseSpec noise;
  std::vector<SceneEvent> events;
  std::uint64_t rng_seed = 1;
  std::string channel_id = "synth:0";
};

// Time-frequency box of an event as it will appear in the truth table.
struct EventBox {
  double t0_s, t1_s, f_lo_hz, f_hi_hz;
};
EventBox SceneEventBox(const SceneEvent& ev);

struct PlacedSignal {
  std::size_t start = 0;  // sample index in the scene
  std::vector<double> samples;
};

struct RenderedScene {
  AudioClip clip;
  std::vector<DetectionEvent> truth;
  // Noise-only and per-event components, kept for SNR verification.
  std::vector<double> noise;
  std::vector<PlacedSignal> event_signals;
  // Mixture samples that had to be clamped into [-1, 1].
  std::size_t clipped_samples = 0;
};

// Time windows (seconds from scene start) over which an event's SNR is
// defined: the whole event, or each pulse for pulse events.
std::vector<std::pair<double, double>> SnrWindows(const SceneEvent& ev);

// Mixes each event into seeded noise so that, inside the event's
// time-frequency box, event RMS / noise RMS equals the requested SNR. For
// pulse events the box is the union of the individual pulse windows.
RenderedScene RenderScene(const SceneSpec& spec);

SceneSpec ParseSceneSpec(const std::string& json_text);
std::string SceneSpecToJson(const SceneSpec& spec);

// RMS of x restricted to [i0, i1) and to the frequency band, computed via a
// DFT of that segment.
double BandLimitedRms(const std::vector<double>& x, std::size_t i0,
                      std::size_t i1, double sample_rate_hz, double f_lo_hz,
                      double f_hi_hz);

}  // namespace asr

#endif  // ASR_SYNTH_HPP_
