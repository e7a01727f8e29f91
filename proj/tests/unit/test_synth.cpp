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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "asr/error.hpp"
#include "asr/spectrogram.hpp"
#include "asr/synth.hpp"
#include "doctest.h"

using namespace asr;

namespace {

// Energy of x[i0, i1) inside [lo, hi] Hz by direct DFT over the window.
double BandEnergy(const std::vector<double>& x, std::size_t i0, std::size_t i1, double sr,
                  double lo, double hi) {
  const std::size_t n = i1 - i0;
  double e = 0.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = k * sr / n;
    if (f < lo || f > hi) continue;
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      acc += x[i0 + t] * std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(t) / double(n));
    }
    const double w = (k == 0 || 2 * k == n) ? 1.0 : 2.0;
    e += w * std::norm(acc) / static_cast<double>(n);
  }
  return e;
}

// In-box SNR in dB, measured on the rendered components.
double MeasuredSnrDb(const RenderedScene& scene, const SceneEvent& ev, std::size_t index,
                     double sr) {
  const EventBox box = SceneEventBox(ev);
  const PlacedSignal& sig = scene.event_signals[index];
  std::vector<double> event_only(scene.noise.size(), 0.0);
  for (std::size_t i = 0; i < sig.samples.size(); ++i) event_only[sig.start + i] = sig.samples[i];
  double es = 0.0, en = 0.0;
  for (auto [a, b] : SnrWindows(ev)) {
    const auto i0 = static_cast<std::size_t>(std::floor(a * sr + 0.5));
    const auto i1 = static_cast<std::size_t>(std::floor(b * sr + 0.5));
    es += BandEnergy(event_only, i0, i1, sr, box.f_lo_hz, box.f_hi_hz);
    en += BandEnergy(scene.noise, i0, i1, sr, box.f_lo_hz, box.f_hi_hz);
  }
  return 10.0 * std::log10(es / en);
}

}  // namespace

TEST_CASE("up-call length and zero amplitude") {
  CHECK(GenUpcall(2000, 1.0, 100, 200, 1.0).samples.size() == 2000);
  for (double s : GenUpcall(2000, 1.0, 100, 200, 0.0).samples) CHECK(s == 0.0);
}

TEST_CASE("up-call peak bounded by amplitude") {
  const auto c = GenUpcall(2000, 1.3, 90, 210, 0.7);
  double peak = 0;
  for (double s : c.samples) peak = std::max(peak, std::fabs(s));
  CHECK(peak <= 0.7);
  CHECK(peak > 0.65);
}

TEST_CASE("up-call spectral ridge ascends from about 100 to about 200 Hz") {
  const auto clip = GenUpcall(2000, 1.0, 100, 200, 1.0);
  SpectrogramParams p;
  p.fft_size = 256;
  p.hop = 64;
  const Spectrogram s = Stft(clip, p);
  std::vector<double> ridge;
  for (std::size_t f = 0; f < s.n_frames(); ++f) {
    std::size_t best = 0;
    for (std::size_t b = 1; b < s.n_bins(); ++b) {
      if (s.power(f, b) > s.power(f, best)) best = b;
    }
    ridge.push_back(s.BinFrequency(static_cast<double>(best)));
  }
  for (std::size_t i = 1; i < ridge.size(); ++i) CHECK(ridge[i] >= ridge[i - 1]);
  CHECK(ridge.front() == doctest::Approx(100 + 100 * (128.0 / 2000.0)).epsilon(0.1));
  CHECK(ridge.back() == doctest::Approx(200 - 100 * (128.0 / 2000.0)).epsilon(0.1));
}

TEST_CASE("up-call rejects Nyquist and ordering violations") {
  CHECK_THROWS_AS(GenUpcall(2000, 1.0, 100, 1000, 1.0), Error);
  CHECK_THROWS_AS(GenUpcall(2000, 1.0, 200, 100, 1.0), Error);
  CHECK_THROWS_AS(GenUpcall(2000, 0.0, 100, 200, 1.0), Error);
}

TEST_CASE("single pulse keeps its energy inside the pulse window") {
  const double dur = 0.05, sr = 2000;
  const auto c = GenPulseTrain(sr, 1.0, 1, dur, 100, 400);
  double total = 0, inside = 0;
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const double t = c.start_time_s + i / sr;
    const double e = c.samples[i] * c.samples[i];
    total += e;
    if (t >= -dur / 2 && t <= dur / 2) inside += e;
  }
  CHECK(total > 0);
  CHECK(inside >= 0.99 * total);
}

TEST_CASE("pulse envelope peaks sit on multiples of the IPI") {
  const double sr = 2000;
  const auto c = GenPulseTrain(sr, 1.0, 4, 0.08, 100, 400);
  for (int k = 0; k < 4; ++k) {
    const long centre = std::lround((k * 1.0 - c.start_time_s) * sr);
    long best = centre - 40;
    for (long i = centre - 40; i <= centre + 40; ++i) {
      if (std::fabs(c.samples[i]) > std::fabs(c.samples[best])) best = i;
    }
    CHECK(std::labs(best - centre) <= 1);
  }
}

TEST_CASE("pulse train parameter violations") {
  CHECK_THROWS_AS(GenPulseTrain(2000, 0.1, 3, 0.1, 100, 400), Error);
  CHECK_THROWS_AS(GenPulseTrain(2000, 0.1, 0, 0.05, 100, 400), Error);
  CHECK_THROWS_AS(GenPulseTrain(2000, 0.5, 3, 0.05, 100, 1200), Error);
}

TEST_CASE("scene with no events is pure noise with empty truth") {
  SceneSpec spec;
  spec.duration_s = 5;
  const auto r = RenderScene(spec);
  CHECK(r.truth.empty());
  CHECK(r.clip.samples == r.noise);
  double ss = 0;
  for (double v : r.noise) ss += v * v;
  CHECK(std::sqrt(ss / r.noise.size()) == doctest::Approx(spec.noise.level));
}

TEST_CASE("same seed renders bit-identical clips") {
  SceneSpec spec;
  spec.duration_s = 10;
  spec.noise.kind = NoiseKind::kPink;
  SceneEvent ev;
  ev.onset_s = 2;
  spec.events.push_back(ev);
  CHECK(RenderScene(spec).clip.samples == RenderScene(spec).clip.samples);
  SceneSpec other = spec;
  other.rng_seed = 2;
  CHECK(RenderScene(other).clip.samples != RenderScene(spec).clip.samples);
}

TEST_CASE("planted SNR is realized within 1 dB") {
  const double sr = 2000;
  for (NoiseKind noise : {NoiseKind::kWhite, NoiseKind::kPink}) {
    for (double snr : {-5.0, 0.0, 10.0, 20.0, 30.0}) {
      SceneSpec spec;
      spec.duration_s = 12;
      spec.noise.kind = noise;
      spec.noise.level = 0.002;
      spec.rng_seed = 9;
      SceneEvent call;
      call.onset_s = 1.0;
      call.snr_db = snr;
      spec.events.push_back(call);
      SceneEvent train;
      train.kind = SceneEventKind::kPulseTrain;
      train.onset_s = 4.0;
      train.n_pulses = 5;
      train.ipi_s = 0.9;
      train.pulse_dur_s = 0.08;
      train.f_lo_hz = 100;
      train.f_hi_hz = 400;
      train.snr_db = snr;
      spec.events.push_back(train);
      const auto r = RenderScene(spec);
      CHECK(r.clipped_samples == 0);
      for (std::size_t e = 0; e < spec.events.size(); ++e) {
        CAPTURE(snr);
        CAPTURE(e);
        CHECK(std::fabs(MeasuredSnrDb(r, spec.events[e], e, sr) - snr) <= 1.0);
      }
    }
  }
}

TEST_CASE("truth rows match the planted events") {
  SceneSpec spec;
  spec.duration_s = 30;
  spec.channel_id = "site:3";
  SceneEvent a;
  a.onset_s = 3;
  a.duration_s = 1.2;
  a.f0_hz = 90;
  a.f1_hz = 210;
  SceneEvent b;
  b.kind = SceneEventKind::kPulseTrain;
  b.onset_s = 10;
  b.n_pulses = 6;
  b.ipi_s = 0.5;
  b.pulse_dur_s = 0.05;
  spec.events = {a, b};
  const auto r = RenderScene(spec);
  REQUIRE(r.truth.size() == 2);
  CHECK(r.truth[0].kind == "upcall");
  CHECK(r.truth[0].t0_s == 3.0);
  CHECK(r.truth[0].t1_s == doctest::Approx(4.2));
  CHECK(r.truth[0].f_lo_hz == 90.0);
  CHECK(r.truth[1].kind == "pulse_train");
  CHECK(r.truth[1].t1_s == doctest::Approx(10 + 5 * 0.5 + 0.05));
  for (const auto& t : r.truth) {
    CHECK(t.channel_id == "site:3");
    CHECK(t.t0_s >= 0.0);
    CHECK(t.t1_s <= spec.duration_s);
  }
}

TEST_CASE("events beyond the clip are rejected") {
  SceneSpec spec;
  spec.duration_s = 5;
  SceneEvent ev;
  ev.onset_s = 4.5;
  spec.events.push_back(ev);
  CHECK_THROWS_AS(RenderScene(spec), Error);
  spec.events[0].onset_s = 1;
  spec.events[0].snr_db = std::nan("");
  CHECK_THROWS_AS(RenderScene(spec), Error);
}

TEST_CASE("scene JSON round trip") {
  const auto spec = ParseSceneSpec(R"({"duration_s": 20, "rng_seed": 5,
    "noise": {"kind": "pink", "level": 0.02},
    "events": [{"kind": "upcall", "onset_s": 2, "snr_db": 12, "params": {"duration_s": 0.9}},
               {"kind": "pulsetrain", "onset_s": 8, "params": {"ipi_s": 0.6, "n_pulses": 7}}]})");
  CHECK(spec.noise.kind == NoiseKind::kPink);
  REQUIRE(spec.events.size() == 2);
  CHECK(spec.events[0].duration_s == 0.9);
  CHECK(spec.events[1].n_pulses == 7);
  const auto again = ParseSceneSpec(SceneSpecToJson(spec));
  CHECK(RenderScene(again).clip.samples == RenderScene(spec).clip.samples);
  CHECK_THROWS_AS(ParseSceneSpec(R"({"duration_s": 5, "events": [{"kind": "whistle", "onset_s": 1}]})"),
                  Error);
}
