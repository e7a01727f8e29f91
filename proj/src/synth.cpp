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

#include "asr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"
#include "fft.hpp"
#include "json.hpp"

namespace asr {

namespace {

constexpr double kPi = std::numbers::pi;

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

void RequireBelowNyquist(double f, double sr, const char* what) {
  if (!(f > 0.0 && f < sr / 2.0)) {
    Fail(ErrorCode::kInvalidArgument,
         std::string(what) + " " + FormatDouble(f) + " Hz outside (0, " +
             FormatDouble(sr / 2.0) + ") Hz");
  }
}

// Hann-windowed band-pass impulse centred at sample `centre` of `out`,
// peaking at `amplitude`.
void AddPulse(std::vector<double>& out, double centre, double sr, double dur_s,
              double f_lo, double f_hi, double amplitude) {
  const double half = dur_s / 2.0;
  const double peak = 2.0 * (f_hi - f_lo);
  const long long i0 = static_cast<long long>(std::ceil(centre - half * sr));
  const long long i1 = static_cast<long long>(std::floor(centre + half * sr));
  for (long long i = std::max(0LL, i0);
       i <= std::min<long long>(i1, static_cast<long long>(out.size()) - 1); ++i) {
    const double t = (static_cast<double>(i) - centre) / sr;
    const double w = 0.5 * (1.0 + std::cos(2.0 * kPi * t / dur_s));
    const double h = 2.0 * f_hi * Sinc(2.0 * f_hi * t) - 2.0 * f_lo * Sinc(2.0 * f_lo * t);
    out[static_cast<std::size_t>(i)] += amplitude * w * h / peak;
  }
}

std::vector<double> ShapeNoise(std::vector<double> white, double sr,
                               const NoiseSpec& spec) {
  if (spec.kind == NoiseKind::kWhite) return white;
  const std::size_t n = white.size();
  auto x = internal::RealForward(white);
  const double df = sr / static_cast<double>(n);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = k * df;
    if (spec.kind == NoiseKind::kPink) {
      x[k] *= k == 0 ? 0.0 : 1.0 / std::sqrt(f);
    } else if (f < spec.band_lo_hz || f > spec.band_hi_hz) {
      x[k] = 0.0;
    }
  }
  return internal::RealInverse(x, n);
}

void ScaleToRms(std::vector<double>& x, double level) {
  double ss = 0.0;
  for (double v : x) ss += v * v;
  const double rms = x.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(x.size()));
  const double g = rms > 0.0 ? level / rms : 0.0;
  for (double& v : x) v *= g;
}

// Unit-peak waveform of an event, relative to its onset sample.
std::vector<double> EventWaveform(const SceneEvent& ev, double sr) {
  switch (ev.kind) {
    case SceneEventKind::kUpcall:
      return GenUpcall(sr, ev.duration_s, ev.f0_hz, ev.f1_hz, 1.0).samples;
    case SceneEventKind::kPulseTrain:
    case SceneEventKind::kPulse: {
      const int n = ev.kind == SceneEventKind::kPulse ? 1 : ev.n_pulses;
      return GenPulseTrain(sr, ev.ipi_s, n, ev.pulse_dur_s, ev.f_lo_hz, ev.f_hi_hz, 1.0)
          .samples;
    }
    case SceneEventKind::kTone: {
      RequireBelowNyquist(ev.f_hz + ev.fm_depth_hz, sr, "tone frequency");
      Require(ev.duration_s > 0, "tone duration must be positive");
      const std::size_t len = static_cast<std::size_t>(std::llround(ev.duration_s * sr));
      std::vector<double> out(len);
      const double ramp = std::min(0.1, ev.duration_s / 4.0);
      double phase = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double t = i / sr;
        double env = 1.0;
        if (t < ramp) env = 0.5 - 0.5 * std::cos(kPi * t / ramp);
        if (ev.duration_s - t < ramp) env = 0.5 - 0.5 * std::cos(kPi * (ev.duration_s - t) / ramp);
        out[i] = env * std::sin(phase);
        const double f = ev.f_hz + ev.fm_depth_hz * std::sin(2.0 * kPi * ev.fm_rate_hz * t);
        phase += 2.0 * kPi * f / sr;
      }
      return out;
    }
  }
  return {};
}

const char* NoiseKindName(NoiseKind k) {
  switch (k) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
    case NoiseKind::kBandLimited: return "band-limited";
  }
  return "white";
}

// Mean in-band power times length over a set of windows.
double WindowedBandEnergy(const std::vector<double>& x,
                          const std::vector<std::pair<std::size_t, std::size_t>>& win,
                          double sr, double lo, double hi, std::size_t* total_len) {
  double e = 0.0;
  std::size_t len = 0;
  for (auto [a, b] : win) {
    const double r = BandLimitedRms(x, a, b, sr, lo, hi);
    e += r * r * static_cast<double>(b - a);
    len += b - a;
  }
  if (total_len) *total_len = len;
  return e;
}

}  // namespace

AudioClip GenUpcall(double sample_rate_hz, double duration_s, double f0_hz,
                    double f1_hz, double amplitude) {
  Require(sample_rate_hz > 0, "sample rate must be positive");
  Require(duration_s > 0, "up-call duration must be positive");
  RequireBelowNyquist(f0_hz, sample_rate_hz, "f0");
  RequireBelowNyquist(f1_hz, sample_rate_hz, "f1");
  Require(f0_hz < f1_hz, "up-call must rise: f0 < f1");
  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  AudioClip clip;
  clip.sample_rate_hz = sample_rate_hz;
  clip.samples.resize(n);
  const double sweep = (f1_hz - f0_hz) / duration_s;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i / sample_rate_hz;
    const double env = 0.5 - 0.5 * std::cos(2.0 * kPi * t / duration_s);
    clip.samples[i] =
        amplitude * env * std::sin(2.0 * kPi * (f0_hz * t + 0.5 * sweep * t * t));
  }
  return clip;
}

AudioClip GenPulseTrain(double sample_rate_hz, double ipi_s, int n_pulses,
                        double pulse_dur_s, double f_lo_hz, double f_hi_hz,
                        double amplitude) {
  Require(sample_rate_hz > 0, "sample rate must be positive");
  Require(n_pulses >= 1, "pulse train needs at least one pulse");
  Require(pulse_dur_s > 0, "pulse duration must be positive");
  Require(n_pulses == 1 || pulse_dur_s < ipi_s,
          "pulse duration must be shorter than the inter-pulse interval");
  RequireBelowNyquist(f_hi_hz, sample_rate_hz, "band upper edge");
  Require(f_lo_hz >= 0 && f_lo_hz < f_hi_hz, "pulse band must satisfy 0 <= f_lo < f_hi");
  const double sr = sample_rate_hz;
  const double span = (n_pulses - 1) * ipi_s + pulse_dur_s;
  const std::size_t n = static_cast<std::size_t>(std::llround(span * sr)) + 1;
  AudioClip clip;
  clip.sample_rate_hz = sr;
  clip.samples.assign(n, 0.0);
  clip.start_time_s = -pulse_dur_s / 2.0;
  for (int k = 0; k < n_pulses; ++k) {
    const double centre = (pulse_dur_s / 2.0 + k * ipi_s) * sr;
    AddPulse(clip.samples, centre, sr, pulse_dur_s, f_lo_hz, f_hi_hz, amplitude);
  }
  return clip;
}

const char* SceneEventKindName(SceneEventKind kind) {
  switch (kind) {
    case SceneEventKind::kUpcall: return "upcall";
    case SceneEventKind::kPulseTrain: return "pulse_train";
    case SceneEventKind::kPulse: return "pulse";
    case SceneEventKind::kTone: return "tone";
  }
  return "event";
}

EventBox SceneEventBox(const SceneEvent& ev) {
  switch (ev.kind) {
    case SceneEventKind::kUpcall:
      return {ev.onset_s, ev.onset_s + ev.duration_s, ev.f0_hz, ev.f1_hz};
    case SceneEventKind::kPulseTrain:
      return {ev.onset_s, ev.onset_s + (ev.n_pulses - 1) * ev.ipi_s + ev.pulse_dur_s,
              ev.f_lo_hz, ev.f_hi_hz};
    case SceneEventKind::kPulse:
      return {ev.onset_s, ev.onset_s + ev.pulse_dur_s, ev.f_lo_hz, ev.f_hi_hz};
    case SceneEventKind::kTone: {
      const double half = std::max(ev.fm_depth_hz, 5.0);
      return {ev.onset_s, ev.onset_s + ev.duration_s, ev.f_hz - half, ev.f_hz + half};
    }
  }
  return {};
}

std::vector<std::pair<double, double>> SnrWindows(const SceneEvent& ev) {
  if (ev.kind == SceneEventKind::kPulseTrain || ev.kind == SceneEventKind::kPulse) {
    const int n = ev.kind == SceneEventKind::kPulse ? 1 : ev.n_pulses;
    std::vector<std::pair<double, double>> w;
    for (int k = 0; k < n; ++k) {
      const double a = ev.onset_s + k * ev.ipi_s;
      w.emplace_back(a, a + ev.pulse_dur_s);
    }
    return w;
  }
  const EventBox box = SceneEventBox(ev);
  return {{box.t0_s, box.t1_s}};
}

double BandLimitedRms(const std::vector<double>& x, std::size_t i0, std::size_t i1,
                      double sample_rate_hz, double f_lo_hz, double f_hi_hz) {
  Require(i0 < i1 && i1 <= x.size(), "band-limited RMS: bad sample range");
  const std::size_t len = i1 - i0;
  std::vector<double> seg(x.begin() + i0, x.begin() + i1);
  const auto spec = internal::RealForward(seg);
  const double df = sample_rate_hz / static_cast<double>(len);
  double e = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = k * df;
    if (f < f_lo_hz || f > f_hi_hz) continue;
    const double w = (k == 0 || (len % 2 == 0 && k == len / 2)) ? 1.0 : 2.0;
    e += w * std::norm(spec[k]);
  }
  return std::sqrt(e) / static_cast<double>(len);
}

RenderedScene RenderScene(const SceneSpec& spec) {
  Require(spec.duration_s > 0, "scene duration must be positive");
  Require(spec.sample_rate_hz > 0, "scene sample rate must be positive");
  const double sr = spec.sample_rate_hz;
  const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration_s * sr));

  RenderedScene scene;
  std::mt19937_64 rng(spec.rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> white(n);
  for (double& v : white) v = normal(rng);
  if (spec.noise.kind == NoiseKind::kBandLimited) {
    Require(spec.noise.band_lo_hz < spec.noise.band_hi_hz,
            "band-limited noise needs band_lo < band_hi");
  }
  scene.noise = ShapeNoise(std::move(white), sr, spec.noise);
  ScaleToRms(scene.noise, spec.noise.level);
  std::vector<double> mix = scene.noise;

  for (std::size_t e = 0; e < spec.events.size(); ++e) {
    const SceneEvent& ev = spec.events[e];
    Require(std::isfinite(ev.snr_db), "event " + std::to_string(e) + ": non-finite SNR");
    const EventBox box = SceneEventBox(ev);
    if (box.t0_s < 0.0 || box.t1_s > spec.duration_s + 1e-9) {
      Fail(ErrorCode::kInvalidArgument,
           "event " + std::to_string(e) + " [" + FormatDouble(box.t0_s) + ", " +
               FormatDouble(box.t1_s) + "] exceeds the scene duration");
    }
    std::vector<double> wave = EventWaveform(ev, sr);
    const std::size_t start = static_cast<std::size_t>(TimeToSampleIndex(ev.onset_s, sr));
    if (start + wave.size() > n) wave.resize(n > start ? n - start : 0);

    std::vector<std::pair<std::size_t, std::size_t>> win_scene, win_local;
    for (auto [a, b] : SnrWindows(ev)) {
      std::size_t i0 = static_cast<std::size_t>(TimeToSampleIndex(a, sr));
      std::size_t i1 = std::min<std::size_t>(
          static_cast<std::size_t>(TimeToSampleIndex(b, sr)), start + wave.size());
      if (i1 <= i0) continue;
      win_scene.emplace_back(i0, i1);
      win_local.emplace_back(i0 - start, i1 - start);
    }
    Require(!win_scene.empty(), "event " + std::to_string(e) + " has no samples");
    std::size_t len = 0;
    const double noise_e =
        WindowedBandEnergy(scene.noise, win_scene, sr, box.f_lo_hz, box.f_hi_hz, &len);
    const double event_e =
        WindowedBandEnergy(wave, win_local, sr, box.f_lo_hz, box.f_hi_hz, nullptr);
    double gain = 0.0;
    if (event_e > 0.0 && noise_e > 0.0) {
      gain = std::pow(10.0, ev.snr_db / 20.0) * std::sqrt(noise_e / event_e);
    } else if (noise_e == 0.0) {
      // Silent background: interpret the SNR against unit in-box level.
      gain = std::pow(10.0, ev.snr_db / 20.0) * 1e-3 / std::sqrt(event_e / len);
    }
    for (double& v : wave) v *= gain;
    for (std::size_t i = 0; i < wave.size(); ++i) mix[start + i] += wave[i];
    scene.event_signals.push_back({start, std::move(wave)});

    DetectionEvent truth;
    truth.id = std::to_string(e + 1);
    truth.channel_id = spec.channel_id;
    truth.t0_s = box.t0_s;
    truth.t1_s = box.t1_s;
    truth.f_lo_hz = box.f_lo_hz;
    truth.f_hi_hz = box.f_hi_hz;
    truth.kind = SceneEventKindName(ev.kind);
    truth.score = 1.0;
    truth.source = "truth";
    scene.truth.push_back(std::move(truth));
  }

  for (double& v : mix) {
    if (v > 1.0 || v < -1.0) {
      ++scene.clipped_samples;
      v = std::clamp(v, -1.0, 1.0);
    }
  }
  scene.clip.samples = std::move(mix);
  scene.clip.sample_rate_hz = sr;
  scene.clip.channel_id = spec.channel_id;
  scene.clip.start_time_s = 0.0;
  return scene;
}

SceneSpec ParseSceneSpec(const std::string& json_text) {
  SceneSpec spec;
  try {
    const auto j = nlohmann::json::parse(json_text);
    spec.duration_s = j.at("duration_s").get<double>();
    spec.sample_rate_hz = j.value("sample_rate_hz", 2000.0);
    spec.rng_seed = j.value("rng_seed", std::uint64_t{1});
    spec.channel_id = j.value("channel_id", std::string("synth:0"));
    if (j.contains("noise")) {
      const auto& nz = j.at("noise");
      const std::string kind = nz.value("kind", std::string("white"));
      if (kind == "white") spec.noise.kind = NoiseKind::kWhite;
      else if (kind == "pink") spec.noise.kind = NoiseKind::kPink;
      else if (kind == "band-limited") spec.noise.kind = NoiseKind::kBandLimited;
      else Fail(ErrorCode::kParse, "scene: unknown noise kind '" + kind + "'");
      spec.noise.level = nz.value("level", 0.05);
      if (nz.contains("band")) {
        spec.noise.band_lo_hz = nz.at("band").at(0).get<double>();
        spec.noise.band_hi_hz = nz.at("band").at(1).get<double>();
      }
    }
    for (const auto& je : j.value("events", nlohmann::json::array())) {
      SceneEvent ev;
      const std::string kind = je.at("kind").get<std::string>();
      if (kind == "upcall") ev.kind = SceneEventKind::kUpcall;
      else if (kind == "pulsetrain" || kind == "pulse_train") ev.kind = SceneEventKind::kPulseTrain;
      else if (kind == "pulse") ev.kind = SceneEventKind::kPulse;
      else if (kind == "tone") ev.kind = SceneEventKind::kTone;
      else Fail(ErrorCode::kParse, "scene: unknown event kind '" + kind + "'");
      ev.onset_s = je.at("onset_s").get<double>();
      ev.snr_db = je.value("snr_db", 10.0);
      const auto p = je.value("params", nlohmann::json::object());
      ev.duration_s = p.value("duration_s", ev.duration_s);
      ev.f0_hz = p.value("f0_hz", ev.f0_hz);
      ev.f1_hz = p.value("f1_hz", ev.f1_hz);
      ev.ipi_s = p.value("ipi_s", ev.ipi_s);
      ev.n_pulses = p.value("n_pulses", ev.n_pulses);
      ev.pulse_dur_s = p.value("pulse_dur_s", ev.pulse_dur_s);
      ev.f_lo_hz = p.value("f_lo_hz", ev.f_lo_hz);
      ev.f_hi_hz = p.value("f_hi_hz", ev.f_hi_hz);
      ev.f_hz = p.value("f_hz", ev.f_hz);
      ev.fm_depth_hz = p.value("fm_depth_hz", ev.fm_depth_hz);
      ev.fm_rate_hz = p.value("fm_rate_hz", ev.fm_rate_hz);
      spec.events.push_back(ev);
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("scene: ") + e.what());
  }
  return spec;
}

std::string SceneSpecToJson(const SceneSpec& spec) {
  nlohmann::ordered_json j;
  j["duration_s"] = spec.duration_s;
  j["sample_rate_hz"] = spec.sample_rate_hz;
  j["rng_seed"] = spec.rng_seed;
  j["channel_id"] = spec.channel_id;
  j["noise"] = {{"kind", NoiseKindName(spec.noise.kind)}, {"level", spec.noise.level}};
  if (spec.noise.kind == NoiseKind::kBandLimited) {
    j["noise"]["band"] = {spec.noise.band_lo_hz, spec.noise.band_hi_hz};
  }
  j["events"] = nlohmann::json::array();
  for (const auto& ev : spec.events) {
    nlohmann::ordered_json je;
    je["kind"] = ev.kind == SceneEventKind::kPulseTrain ? "pulsetrain" : SceneEventKindName(ev.kind);
    je["onset_s"] = ev.onset_s;
    je["snr_db"] = ev.snr_db;
    switch (ev.kind) {
      case SceneEventKind::kUpcall:
        je["params"] = {{"duration_s", ev.duration_s}, {"f0_hz", ev.f0_hz}, {"f1_hz", ev.f1_hz}};
        break;
      case SceneEventKind::kPulseTrain:
      case SceneEventKind::kPulse:
        je["params"] = {{"ipi_s", ev.ipi_s},         {"n_pulses", ev.n_pulses},
                        {"pulse_dur_s", ev.pulse_dur_s}, {"f_lo_hz", ev.f_lo_hz},
                        {"f_hi_hz", ev.f_hi_hz}};
        break;
      case SceneEventKind::kTone:
        je["params"] = {{"duration_s", ev.duration_s}, {"f_hz", ev.f_hz},
                        {"fm_depth_hz", ev.fm_depth_hz}, {"fm_rate_hz", ev.fm_rate_hz}};
        break;
    }
    j["events"].push_back(je);
  }
  return j.dump(2) + "\n";
}

}  // namespace asr
