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

#include "asr/detector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"
#include "json.hpp"

namespace asr {

namespace {

using nlohmann::json;

// Reads keys from a JSON object, rejecting any key that is never read.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    Require(j_.is_object(), where_ + ": expected a JSON object", ErrorCode::kParse);
  }
  ~ObjectReader() = default;

  template <typename T>
  void Get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      Fail(ErrorCode::kParse, where_ + ": invalid value for '" + key + "'");
    }
  }
  const json* Child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  void Finish() const {
    for (const auto& [k, v] : j_.items()) {
      Require(seen_.count(k) > 0, where_ + ": unknown key '" + k + "'", ErrorCode::kParse);
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json ParseObject(const std::string& text, const std::string& where) {
  if (Trim(text).empty()) return json::object();
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, where + ": " + e.what());
  }
}

const char* WindowName(WindowKind k) { return k == WindowKind::kHann ? "hann" : "rectangular"; }

WindowKind ParseWindow(const std::string& s) {
  if (s == "hann") return WindowKind::kHann;
  if (s == "rectangular") return WindowKind::kRectangular;
  Fail(ErrorCode::kParse, "unknown window '" + s + "'");
}

const char* ModeName(ThresholdMode m) {
  return m == ThresholdMode::kGlobalPercentile ? "global" : "per_bin";
}

ThresholdMode ParseMode(const std::string& s) {
  if (s == "global") return ThresholdMode::kGlobalPercentile;
  if (s == "per_bin") return ThresholdMode::kPerBinPercentile;
  Fail(ErrorCode::kParse, "unknown threshold mode '" + s + "'");
}

void ReadStft(ObjectReader& r, SpectrogramParams& p) {
  std::string window = WindowName(p.window);
  r.Get("fft_size", p.fft_size);
  r.Get("hop", p.hop);
  r.Get("window", window);
  p.window = ParseWindow(window);
}

void WriteStft(json& j, const SpectrogramParams& p) {
  j["fft_size"] = p.fft_size;
  j["hop"] = p.hop;
  j["window"] = WindowName(p.window);
}

double Overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

DetectionEvent RegionEvent(const Region& r, const std::string& label, const std::string& channel,
                           const std::string& source) {
  DetectionEvent ev;
  ev.channel_id = channel;
  ev.t0_s = r.bbox.t0_s;
  ev.t1_s = r.bbox.t1_s;
  ev.f_lo_hz = r.bbox.f_lo_hz;
  ev.f_hi_hz = r.bbox.f_hi_hz;
  ev.kind = label;
  ev.source = source;
  return ev;
}

// Nearest-neighbour enlargement so the mask has at least min_rows x min_cols.
MaskMatrix EnsureSize(const MaskMatrix& m, std::size_t min_rows, std::size_t min_cols) {
  if (m.rows() >= min_rows && m.cols() >= min_cols) return m;
  const std::size_t rows = std::max(m.rows(), min_rows);
  const std::size_t cols = std::max(m.cols(), min_cols);
  MaskMatrix out(rows, cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m(r * m.rows() / rows, c * m.cols() / cols);
  }
  return out;
}

}  // namespace

const char* FmBranchName(FmBranch branch) { return branch == FmBranch::kCra ? "cra" : "hog"; }

FmBranch ParseFmBranch(const std::string& name) {
  if (name == "cra") return FmBranch::kCra;
  if (name == "hog") return FmBranch::kHog;
  Fail(ErrorCode::kInvalidArgument, "unknown FM branch '" + name + "' (expected cra or hog)");
}

std::string FmConfig::Fingerprint() const {
  return branch == FmBranch::kCra ? GridMaskFingerprint(grid_rows, grid_cols)
                                  : HogFingerprint(hog, patch_rows, patch_cols);
}

void FmConfig::Validate() const {
  stft.Validate();
  Require(nu > 0, "nu must be positive");
  Require(noise_window_frames >= 5, "noise window must span at least 5 frames");
  Require(percentile > 0 && percentile <= 100, "percentile must lie in (0, 100]");
  Require(connectivity == 4 || connectivity == 8, "connectivity must be 4 or 8");
  Require(grid_rows >= 1 && grid_cols >= 1, "grid dimensions must be positive");
  mser.Validate();
  Require(std::isfinite(mser_min_contrast_db), "mser_min_contrast_db must be finite");
  hog.Validate();
  Require(patch_rows >= 2 && patch_cols >= 2, "patch must be at least 2x2");
  Require(patch_rows % static_cast<std::size_t>(hog.cell_px) == 0 &&
              patch_cols % static_cast<std::size_t>(hog.cell_px) == 0,
          "patch dimensions must be multiples of the HOG cell size");
  Require(HogLength(hog, patch_rows, patch_cols) > 0, "patch too small for one HOG block");
  Require(pad_frac >= 0, "pad_frac must be nonnegative");
  Require(band_lo_hz >= 0 && band_lo_hz < band_hi_hz, "band must satisfy 0 <= lo < hi");
  Require(bounds.min_duration_s <= bounds.max_duration_s &&
              bounds.min_bandwidth_hz <= bounds.max_bandwidth_hz,
          "inconsistent region bounds");
  Require(gap.dt_s >= 0 && gap.df_hz >= 0, "merge gaps must be nonnegative");
  Require(nms_overlap >= 0 && nms_overlap <= 1, "nms_overlap must lie in [0, 1]");
  Require(!label.empty(), "label must not be empty");
}

FmConfig FmConfigFromJson(const std::string& text) {
  const json j = ParseObject(text, "FM parameters");
  FmConfig c;
  ObjectReader r(j, "FM parameters");
  std::string branch = FmBranchName(c.branch);
  std::string mode = ModeName(c.threshold_mode);
  r.Get("branch", branch);
  c.branch = ParseFmBranch(branch);
  ReadStft(r, c.stft);
  r.Get("nu", c.nu);
  r.Get("noise_window_frames", c.noise_window_frames);
  r.Get("threshold_mode", mode);
  c.threshold_mode = ParseMode(mode);
  r.Get("percentile", c.percentile);
  r.Get("connectivity", c.connectivity);
  r.Get("grid_rows", c.grid_rows);
  r.Get("grid_cols", c.grid_cols);
  if (const json* m = r.Child("mser")) {
    ObjectReader mr(*m, "FM parameters.mser");
    mr.Get("delta", c.mser.delta);
    mr.Get("min_area_px", c.mser.min_area_px);
    mr.Get("max_area_px", c.mser.max_area_px);
    mr.Get("max_variation", c.mser.max_variation);
    mr.Get("min_diversity", c.mser.min_diversity);
    mr.Finish();
  }
  c.mser.connectivity = c.connectivity;
  r.Get("mser_min_contrast_db", c.mser_min_contrast_db);
  r.Get("patch_rows", c.patch_rows);
  r.Get("patch_cols", c.patch_cols);
  r.Get("pad_frac", c.pad_frac);
  if (const json* h = r.Child("hog")) {
    ObjectReader hr(*h, "FM parameters.hog");
    hr.Get("cell_px", c.hog.cell_px);
    hr.Get("block_cells", c.hog.block_cells);
    hr.Get("n_bins", c.hog.n_bins);
    hr.Finish();
  }
  r.Get("band_lo_hz", c.band_lo_hz);
  r.Get("band_hi_hz", c.band_hi_hz);
  if (const json* b = r.Child("bounds")) {
    ObjectReader br(*b, "FM parameters.bounds");
    br.Get("min_duration_s", c.bounds.min_duration_s);
    br.Get("max_duration_s", c.bounds.max_duration_s);
    br.Get("min_bandwidth_hz", c.bounds.min_bandwidth_hz);
    br.Get("max_bandwidth_hz", c.bounds.max_bandwidth_hz);
    br.Get("min_area_px", c.bounds.min_area_px);
    br.Finish();
  }
  if (const json* g = r.Child("gap")) {
    ObjectReader gr(*g, "FM parameters.gap");
    gr.Get("dt_s", c.gap.dt_s);
    gr.Get("df_hz", c.gap.df_hz);
    gr.Finish();
  }
  r.Get("nms_overlap", c.nms_overlap);
  r.Get("label", c.label);
  r.Finish();
  c.Validate();
  return c;
}

std::string FmConfigToJson(const FmConfig& c) {
  nlohmann::ordered_json j;
  j["branch"] = FmBranchName(c.branch);
  json stft;
  WriteStft(stft, c.stft);
  for (const auto& [k, v] : stft.items()) j[k] = v;
  j["nu"] = c.nu;
  j["noise_window_frames"] = c.noise_window_frames;
  j["threshold_mode"] = ModeName(c.threshold_mode);
  j["percentile"] = c.percentile;
  j["connectivity"] = c.connectivity;
  j["grid_rows"] = c.grid_rows;
  j["grid_cols"] = c.grid_cols;
  j["mser"] = {{"delta", c.mser.delta},
               {"min_area_px", c.mser.min_area_px},
               {"max_area_px", c.mser.max_area_px},
               {"max_variation", c.mser.max_variation},
               {"min_diversity", c.mser.min_diversity}};
  j["mser_min_contrast_db"] = c.mser_min_contrast_db;
  j["patch_rows"] = c.patch_rows;
  j["patch_cols"] = c.patch_cols;
  j["pad_frac"] = c.pad_frac;
  j["hog"] = {{"cell_px", c.hog.cell_px},
              {"block_cells", c.hog.block_cells},
              {"n_bins", c.hog.n_bins}};
  j["band_lo_hz"] = c.band_lo_hz;
  j["band_hi_hz"] = c.band_hi_hz;
  j["bounds"] = {{"min_duration_s", c.bounds.min_duration_s},
                 {"max_duration_s", c.bounds.max_duration_s},
                 {"min_bandwidth_hz", c.bounds.min_bandwidth_hz},
                 {"max_bandwidth_hz", c.bounds.max_bandwidth_hz},
                 {"min_area_px", c.bounds.min_area_px}};
  j["gap"] = {{"dt_s", c.gap.dt_s}, {"df_hz", c.gap.df_hz}};
  j["nms_overlap"] = c.nms_overlap;
  j["label"] = c.label;
  return j.dump(2) + "\n";
}

FmDetector::FmDetector(FmConfig config) : config_(std::move(config)) {
  config_.mser.connectivity = config_.connectivity;
  config_.Validate();
}

FmDetector::Conditioned FmDetector::Condition(const AudioClip& clip) const {
  Conditioned c;
  c.raw = Stft(clip, config_.stft);
  c.denoised = PowerLawDenoise(c.raw, config_.nu, config_.noise_window_frames);
  c.equalized = NormalizeEqualize(c.denoised);
  return c;
}

FeatureVector FmDetector::RegionFeatures(const Conditioned& cond, const BinaryMask* mask,
                                         const Region& region) const {
  if (config_.branch == FmBranch::kCra) {
    MaskMatrix local(region.n_bins(), region.n_frames(), 0);
    if (mask) {
      for (std::size_t b = region.bin_min; b <= region.bin_max; ++b) {
        for (std::size_t f = region.frame_min; f <= region.frame_max; ++f) {
          local(b - region.bin_min, f - region.frame_min) = mask->bits(f, b);
        }
      }
    } else {
      local = region.LocalMask();
    }
    return GridMaskFeatures(EnsureSize(local, config_.grid_rows, config_.grid_cols),
                            config_.grid_rows, config_.grid_cols);
  }
  const MatrixD patch = ExtractPatch(cond.equalized.power, region, config_.patch_rows,
                                     config_.patch_cols, config_.pad_frac);
  return HogFeatures(patch, config_.hog);
}

namespace {

std::vector<Region> FmRegions(const FmConfig& config, const Spectrogram& denoised,
                              const Spectrogram& equalized, BinaryMask* mask_out) {
  std::vector<Region> regions;
  if (config.branch == FmBranch::kCra) {
    *mask_out = Binarize(equalized, config.threshold_mode, config.percentile);
    regions = ConnectedRegions(*mask_out, equalized, config.connectivity);
  } else {
    const double floor = std::pow(std::pow(10.0, config.mser_min_contrast_db / 10.0), config.nu);
    for (auto& r : MserDetect(denoised, config.mser)) {
      if (r.mean_intensity >= floor) regions.push_back(std::move(r));
    }
  }
  std::vector<Region> in_band;
  for (auto& r : regions) {
    const double centre = (r.bbox.f_lo_hz + r.bbox.f_hi_hz) / 2.0;
    if (centre >= config.band_lo_hz && centre <= config.band_hi_hz) in_band.push_back(std::move(r));
  }
  return FilterMerge(in_band, config.bounds, config.gap);
}

}  // namespace

std::vector<FmCandidate> FmDetector::Candidates(const AudioClip& clip) const {
  const Conditioned cond = Condition(clip);
  BinaryMask mask;
  std::vector<FmCandidate> out;
  for (Region& r : FmRegions(config_, cond.denoised, cond.equalized, &mask)) {
    FeatureVector f = RegionFeatures(cond, nullptr, r);
    out.push_back({std::move(r), std::move(f)});
  }
  return out;
}

std::vector<DetectionEvent> FmDetector::Detect(const AudioClip& clip, const Classifier* model,
                                               double threshold, bool attach_features) const {
  const std::string source = std::string("fm-") + FmBranchName(config_.branch);
  struct Scored {
    DetectionEvent ev;
    std::size_t order;
  };
  std::vector<Scored> scored;
  std::size_t k = 0;
  for (FmCandidate& c : Candidates(clip)) {
    const double s = model ? model->Score(c.features) : 1.0;
    if (!std::isfinite(s) || s < threshold) continue;
    DetectionEvent ev = RegionEvent(c.region, config_.label, clip.channel_id, source);
    ev.score = s;
    if (attach_features) ev.features = std::move(c.features);
    scored.push_back({std::move(ev), k++});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.ev.score != b.ev.score) return a.ev.score > b.ev.score;
    return a.order < b.order;
  });
  std::vector<DetectionEvent> kept;
  for (Scored& s : scored) {
    bool suppressed = false;
    for (const DetectionEvent& e : kept) {
      const double shorter = std::min(e.duration_s(), s.ev.duration_s());
      if (shorter > 0 &&
          Overlap(e.t0_s, e.t1_s, s.ev.t0_s, s.ev.t1_s) > config_.nms_overlap * shorter) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(std::move(s.ev));
  }
  std::sort(kept.begin(), kept.end(), [](const DetectionEvent& a, const DetectionEvent& b) {
    return std::tie(a.t0_s, a.f_lo_hz, a.t1_s) < std::tie(b.t0_s, b.f_lo_hz, b.t1_s);
  });
  return kept;
}

double FmDetector::EdgeGuardSeconds() const {
  return static_cast<double>(config_.stft.fft_size + config_.stft.hop) /
         static_cast<double>(kDefaultSampleRateHz);
}

std::size_t TrainingSet::positives() const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
}

std::size_t TrainingSet::negatives() const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), 0));
}

struct FmHarvester {
  static void Run(const FmDetector& det, const AudioClip& clip,
                  const std::vector<DetectionEvent>& truths, const HarvestOptions& options,
                  TrainingSet* out) {
    Require(out != nullptr, "training set output is null");
    Require(options.positive_overlap > 0 && options.positive_overlap <= 1,
            "positive_overlap must lie in (0, 1]");
    const FmConfig& config = det.config_;
    const FmDetector::Conditioned cond = det.Condition(clip);
    BinaryMask mask;
    const auto regions = FmRegions(config, cond.denoised, cond.equalized, &mask);
    for (const Region& r : regions) {
      double best = 0.0;
      bool touches = false;
      for (const auto& t : truths) {
        const double ov = Overlap(r.bbox.t0_s, r.bbox.t1_s, t.t0_s, t.t1_s);
        if (ov > 0) touches = true;
        if (t.duration_s() > 0) best = std::max(best, ov / t.duration_s());
      }
      int label = -1;
      if (best >= options.positive_overlap) {
        label = 1;
      } else if (!touches) {
        label = 0;
      }
      if (label < 0) continue;
      out->x.push_back(det.RegionFeatures(cond, nullptr, r));
      out->y.push_back(label);
    }
    if (options.random_negatives <= 0) return;

    // Random call-sized boxes away from every truth.
    const Spectrogram& geo = cond.equalized;
    if (config.branch == FmBranch::kCra && mask.bits.empty()) {
      mask = Binarize(cond.equalized, config.threshold_mode, config.percentile);
    }
    std::vector<double> durations, bandwidths;
    for (const auto& t : truths) {
      durations.push_back(t.duration_s());
      bandwidths.push_back(t.f_hi_hz - t.f_lo_hz);
    }
    const double dur = durations.empty() ? 1.0 : durations[durations.size() / 2];
    const double bw = bandwidths.empty() ? 100.0 : bandwidths[bandwidths.size() / 2];
    const double clip_t0 = geo.FrameSpanStart(0);
    const double clip_t1 = geo.FrameSpanEnd(geo.n_frames() - 1);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> scale(0.6, 1.4);
    int made = 0;
    for (int attempt = 0; attempt < options.random_negatives * 20 && made < options.random_negatives;
         ++attempt) {
      const double d = std::max(dur * scale(rng), 2 * geo.time_step_s);
      const double w = std::max(bw * scale(rng), 2 * geo.freq_step_hz);
      if (clip_t1 - clip_t0 <= d || config.band_hi_hz - config.band_lo_hz <= w) break;
      const double t0 = std::uniform_real_distribution<double>(clip_t0, clip_t1 - d)(rng);
      const double f0 =
          std::uniform_real_distribution<double>(config.band_lo_hz, config.band_hi_hz - w)(rng);
      bool clear = true;
      for (const auto& t : truths) clear &= Overlap(t0, t0 + d, t.t0_s, t.t1_s) <= 0;
      if (!clear) continue;
      Region box;
      box.frame_min = static_cast<std::uint32_t>(geo.NearestFrame(t0));
      box.frame_max = static_cast<std::uint32_t>(geo.NearestFrame(t0 + d));
      const auto bins = geo.BinRange(f0, f0 + w);
      if (bins.first > bins.second || box.frame_max <= box.frame_min) continue;
      box.bin_min = static_cast<std::uint32_t>(bins.first);
      box.bin_max = static_cast<std::uint32_t>(bins.second);
      if (box.bin_max == box.bin_min) continue;
      out->x.push_back(det.RegionFeatures(cond, config.branch == FmBranch::kCra ? &mask : nullptr,
                                          box));
      out->y.push_back(0);
      ++made;
    }
  }
};

void HarvestFm(const FmDetector& detector, const AudioClip& clip,
               const std::vector<DetectionEvent>& truths, const HarvestOptions& options,
               TrainingSet* out) {
  FmHarvester::Run(detector, clip, truths, options, out);
}

void PtConfig::Validate() const {
  stft.Validate();
  Require(nu > 0, "nu must be positive");
  Require(noise_window_frames >= 5, "noise window must span at least 5 frames");
  Require(percentile > 0 && percentile <= 100, "percentile must lie in (0, 100]");
  Require(band_lo_hz >= 0 && band_lo_hz < band_hi_hz, "band must satisfy 0 <= lo < hi");
  Require(min_prominence_frac > 0, "min_prominence_frac must be positive");
  Require(min_separation_s >= 0, "min_separation_s must be nonnegative");
  train.Validate();
  Require(!label.empty(), "label must not be empty");
}

PtConfig PtConfigFromJson(const std::string& text) {
  const json j = ParseObject(text, "PT parameters");
  PtConfig c;
  ObjectReader r(j, "PT parameters");
  std::string mode = ModeName(c.threshold_mode);
  ReadStft(r, c.stft);
  r.Get("nu", c.nu);
  r.Get("noise_window_frames", c.noise_window_frames);
  r.Get("threshold_mode", mode);
  c.threshold_mode = ParseMode(mode);
  r.Get("percentile", c.percentile);
  r.Get("band_lo_hz", c.band_lo_hz);
  r.Get("band_hi_hz", c.band_hi_hz);
  r.Get("min_prominence_frac", c.min_prominence_frac);
  r.Get("min_separation_s", c.min_separation_s);
  r.Get("ipi_min_s", c.train.ipi_min_s);
  r.Get("ipi_max_s", c.train.ipi_max_s);
  r.Get("ipi_tol_cv", c.train.ipi_tol_cv);
  r.Get("min_count", c.train.min_count);
  r.Get("label", c.label);
  r.Finish();
  c.Validate();
  return c;
}

std::string PtConfigToJson(const PtConfig& c) {
  nlohmann::ordered_json j;
  json stft;
  WriteStft(stft, c.stft);
  for (const auto& [k, v] : stft.items()) j[k] = v;
  j["nu"] = c.nu;
  j["noise_window_frames"] = c.noise_window_frames;
  j["threshold_mode"] = ModeName(c.threshold_mode);
  j["percentile"] = c.percentile;
  j["band_lo_hz"] = c.band_lo_hz;
  j["band_hi_hz"] = c.band_hi_hz;
  j["min_prominence_frac"] = c.min_prominence_frac;
  j["min_separation_s"] = c.min_separation_s;
  j["ipi_min_s"] = c.train.ipi_min_s;
  j["ipi_max_s"] = c.train.ipi_max_s;
  j["ipi_tol_cv"] = c.train.ipi_tol_cv;
  j["min_count"] = c.train.min_count;
  j["label"] = c.label;
  return j.dump(2) + "\n";
}

PtDetector::PtDetector(PtConfig config) : config_(std::move(config)) { config_.Validate(); }

std::vector<PulseTrain> PtDetector::Trains(const AudioClip& clip) const {
  const Spectrogram raw = Stft(clip, config_.stft);
  const Spectrogram den = PowerLawDenoise(raw, config_.nu, config_.noise_window_frames);
  const BinaryMask mask = Binarize(den, config_.threshold_mode, config_.percentile);
  const auto series = EnergyProjection(mask, den, config_.band_lo_hz, config_.band_hi_hz);
  const auto [lo, hi] = den.BinRange(config_.band_lo_hz, config_.band_hi_hz);
  const double n_band = static_cast<double>(hi - lo + 1);
  std::vector<Pulse> pulses =
      DetectPulses(series, den.time_step_s, den.FrameCenterTime(0),
                   config_.min_prominence_frac * n_band, config_.min_separation_s);
  for (Pulse& p : pulses) {
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) sum += den.power(p.frame, k);
    p.strength = 10.0 * std::log10(1.0 + sum / n_band);
  }
  std::vector<PulseTrain> trains = GroupTrains(std::move(pulses), config_.train);
  for (PulseTrain& t : trains) {
    // Band: bins set in at least half of the train's pulse frames.
    std::size_t b_lo = hi + 1, b_hi = lo;
    for (std::size_t k = lo; k <= hi; ++k) {
      std::size_t hits = 0;
      for (const Pulse& p : t.pulses) hits += mask.bits(p.frame, k) ? 1 : 0;
      if (2 * hits >= t.pulses.size()) {
        b_lo = std::min(b_lo, k);
        b_hi = std::max(b_hi, k);
      }
    }
    if (b_lo > b_hi) {
      b_lo = lo;
      b_hi = hi;
    }
    t.f_lo_hz = std::max(0.0, (static_cast<double>(b_lo) - 0.5) * den.freq_step_hz);
    t.f_hi_hz = (static_cast<double>(b_hi) + 0.5) * den.freq_step_hz;
    double s = 0.0;
    for (const Pulse& p : t.pulses) s += p.strength;
    t.score = s / static_cast<double>(t.pulses.size());
  }
  return trains;
}

DetectionEvent TrainToEvent(const PulseTrain& train, const std::string& label,
                            const std::string& channel_id) {
  DetectionEvent ev;
  ev.channel_id = channel_id;
  ev.t0_s = train.t0_s;
  ev.t1_s = train.t1_s;
  ev.f_lo_hz = train.f_lo_hz;
  ev.f_hi_hz = train.f_hi_hz;
  ev.kind = label;
  ev.score = train.score;
  ev.source = "pt";
  ev.features = TrainFeatures(train);
  return ev;
}

std::vector<DetectionEvent> PtDetector::Detect(const AudioClip& clip, const Classifier* model,
                                               double threshold) const {
  std::vector<DetectionEvent> out;
  for (const PulseTrain& t : Trains(clip)) {
    DetectionEvent ev = TrainToEvent(t, config_.label, clip.channel_id);
    if (model) ev.score = model->Score(*ev.features);
    if (ev.score >= threshold) out.push_back(std::move(ev));
  }
  return out;
}

double PtDetector::EdgeGuardSeconds() const { return config_.train.ipi_max_s; }

namespace {

std::string ModelText(const std::optional<Classifier>& model) {
  return model ? ClassifierToJson(*model) : std::string("none");
}

class FmPipeline : public Pipeline {
 public:
  FmPipeline(FmConfig config, std::optional<Classifier> model, double threshold)
      : det_(std::move(config)), model_(std::move(model)), threshold_(threshold) {
    if (model_) {
      Require(model_->kind != Classifier::Kind::kFusion,
              "fusion models cannot score FM candidates");
      Require(model_->fingerprint() == det_.config().Fingerprint(),
              "model feature scheme '" + model_->fingerprint() +
                  "' does not match the pipeline's '" + det_.config().Fingerprint() + "'",
              ErrorCode::kMismatch);
    }
  }
  std::vector<DetectionEvent> Run(const AudioClip& clip) const override {
    return det_.Detect(clip, model_ ? &*model_ : nullptr, threshold_, true);
  }
  std::string Name() const override {
    return std::string("fm-") + FmBranchName(det_.config().branch);
  }
  std::string Fingerprint() const override {
    return Fnv1aHex(Name() + "\n" + FmConfigToJson(det_.config()) + "\n" + ModelText(model_) +
                    "\n" + FormatDouble(threshold_));
  }
  double EdgeGuardSeconds() const override { return det_.EdgeGuardSeconds(); }

 private:
  FmDetector det_;
  std::optional<Classifier> model_;
  double threshold_;
};

class PtPipeline : public Pipeline {
 public:
  PtPipeline(PtConfig config, std::optional<Classifier> model, double threshold)
      : det_(std::move(config)), model_(std::move(model)), threshold_(threshold) {
    if (model_) {
      Require(model_->fingerprint() == kTrainFeatureFingerprint,
              "model feature scheme '" + model_->fingerprint() +
                  "' does not match pulse-train features",
              ErrorCode::kMismatch);
    }
  }
  std::vector<DetectionEvent> Run(const AudioClip& clip) const override {
    return det_.Detect(clip, model_ ? &*model_ : nullptr, threshold_);
  }
  std::string Name() const override { return "pt"; }
  std::string Fingerprint() const override {
    return Fnv1aHex(Name() + "\n" + PtConfigToJson(det_.config()) + "\n" + ModelText(model_) +
                    "\n" + FormatDouble(threshold_));
  }
  double EdgeGuardSeconds() const override { return det_.EdgeGuardSeconds(); }

 private:
  PtDetector det_;
  std::optional<Classifier> model_;
  double threshold_;
};

}  // namespace

std::unique_ptr<Pipeline> MakePipeline(const std::string& name, const std::string& params_json,
                                       std::optional<Classifier> model, double threshold) {
  if (name == "fm-cra" || name == "fm-hog") {
    json j = ParseObject(params_json, "FM parameters");
    Require(j.is_object(), "FM parameters: expected a JSON object", ErrorCode::kParse);
    const std::string branch = name.substr(3);
    if (j.contains("branch")) {
      Require(j["branch"] == branch, "parameter branch conflicts with pipeline '" + name + "'");
    }
    j["branch"] = branch;
    return std::make_unique<FmPipeline>(FmConfigFromJson(j.dump()), std::move(model), threshold);
  }
  if (name == "pt") {
    return std::make_unique<PtPipeline>(PtConfigFromJson(params_json), std::move(model), threshold);
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown pipeline '" + name + "' (expected fm-cra, fm-hog or pt)");
}

}  // namespace asr
