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

#ifndef ASR_DETECTOR_HPP_
#define ASR_DETECTOR_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asr/audio_io.hpp"
#include "asr/classify.hpp"
#include "asr/events.hpp"
#include "asr/features.hpp"
#include "asr/pulsetrain.hpp"
#include "asr/roi.hpp"
#include "asr/spectrogram.hpp"

namespace asr {

enum class FmBranch { kCra, kHog };

const char* FmBranchName(FmBranch branch);
FmBranch ParseFmBranch(const std::string& name);

// FM-call detector front end and feature extraction for both branches.
//   cra: stft -> power law -> normalize/equalize -> binarize -> connected
//        regions -> filter/merge -> grid-mask features
//   hog: stft -> power law -> MSER -> filter/merge -> patch from the
//        normalized spectrogram -> HOG
struct FmConfig {
  FmBranch branch = FmBranch::kCra;
  SpectrogramParams stft;
  double nu = 1.5;
  int noise_window_frames = 63;

  ThresholdMode threshold_mode = ThresholdMode::kGlobalPercentile;
  double percentile = 98.5;
  int connectivity = 8;
  int grid_rows = 5;
  int grid_cols = 8;

  MserParams mser;
  // MSER regions whose mean denoised value is below the power ratio of this
  // many dB (raised to nu) are dropped before filtering.
  double mser_min_contrast_db = 10.0;
  std::size_t patch_rows = 32;
  std::size_t patch_cols = 64;
  double pad_frac = 0.1;
  HogParams hog;

  // Regions whose bbox centre falls outside this band are ignored.
  double band_lo_hz = 40.0;
  double band_hi_hz = 400.0;
  RegionBounds bounds{0.25, 3.0, 20.0, 400.0, 12};
  MergeGap gap{0.1, 20.0};
  // Lower-scored detections overlapping a kept one by more than this
  // fraction of the shorter duration are suppressed.
  double nms_overlap = 0.3;
  std::string label = "upcall";

  std::string Fingerprint() const;  // of the feature scheme
  void Validate() const;
};

FmConfig FmConfigFromJson(const std::string& json_text);
std::string FmConfigToJson(const FmConfig& config);

struct FmCandidate {
  Region region;
  FeatureVector features;
};

class FmDetector {
 public:
  explicit FmDetector(FmConfig config);

  const FmConfig& config() const { return config_; }

  // Every region that survives filter/merge, with its features.
  std::vector<FmCandidate> Candidates(const AudioClip& clip) const;

  // Scores candidates (1.0 for all when model is null), keeps those at or
  // above threshold and applies overlap suppression.
  std::vector<DetectionEvent> Detect(const AudioClip& clip,
                                     const Classifier* model,
                                     double threshold,
                                     bool attach_features = false) const;

  // Events ending this close to a segment edge may be truncated.
  double EdgeGuardSeconds() const;

 private:
  struct Conditioned {
    Spectrogram raw;
    Spectrogram denoised;
    Spectrogram equalized;
  };
  Conditioned Condition(const AudioClip& clip) const;
  FeatureVector RegionFeatures(const Conditioned& cond, const BinaryMask* mask,
                               const Region& region) const;

  friend struct FmHarvester;
  FmConfig config_;
};

// Supervised examples for the FM classifiers.
struct TrainingSet {
  std::vector<FeatureVector> x;
  std::vector<int> y;  // 1 = call, 0 = noise

  std::size_t positives() const;
  std::size_t negatives() const;
};

struct HarvestOptions {
  // Candidates overlapping a truth by at least this fraction of the truth
  // duration are positives; candidates touching no truth are negatives;
  // anything in between is left out.
  double positive_overlap = 0.5;
  // Extra negatives drawn as random call-sized boxes away from truths.
  int random_negatives = 0;
  std::uint64_t seed = 1;
};

void HarvestFm(const FmDetector& detector, const AudioClip& clip,
               const std::vector<DetectionEvent>& truths,
               const HarvestOptions& options, TrainingSet* out);

struct PtConfig {
  SpectrogramParams stft;
  double nu = 1.5;
  int noise_window_frames = 63;
  ThresholdMode threshold_mode = ThresholdMode::kPerBinPercentile;
  double percentile = 98.0;
  double band_lo_hz = 50.0;
  double band_hi_hz = 400.0;
  // Minimum pulse prominence as a fraction of the bins in the band.
  double min_prominence_frac = 0.2;
  double min_separation_s = 0.2;
  TrainParams train{0.1, 2.0, 0.25, 5};
  std::string label = "pulse_train";

  void Validate() const;
};

PtConfig PtConfigFromJson(const std::string& json_text);
std::string PtConfigToJson(const PtConfig& config);

// Pulse-train detector: binarized spectrogram -> band projection -> pulse
// picking -> periodic grouping. Pulse strength is the mean in-band
// conditioned power at the pulse frame, in dB.
class PtDetector {
 public:
  explicit PtDetector(PtConfig config);

  const PtConfig& config() const { return config_; }

  std::vector<PulseTrain> Trains(const AudioClip& clip) const;

  // Score is the model output when a model is given, otherwise the mean
  // pulse strength. Events carry the eight train features.
  std::vector<DetectionEvent> Detect(const AudioClip& clip,
                                     const Classifier* model,
                                     double threshold) const;

  double EdgeGuardSeconds() const;

 private:
  PtConfig config_;
};

DetectionEvent TrainToEvent(const PulseTrain& train, const std::string& label,
                            const std::string& channel_id);

// A named, fully configured detection pipeline as run by the batch engine.
class Pipeline {
 public:
  virtual ~Pipeline() = default;
  virtual std::vector<DetectionEvent> Run(const AudioClip& clip) const = 0;
  virtual std::string Name() const = 0;
  // Hash of the pipeline name, parameters and model.
  virtual std::string Fingerprint() const = 0;
  virtual double EdgeGuardSeconds() const = 0;
};

// name: "fm-cra", "fm-hog" or "pt". params_json may be empty (defaults).
// model may be null, in which case FM candidates score 1.0.
std::unique_ptr<Pipeline> MakePipeline(const std::string& name,
                                       const std::string& params_json,
                                       std::optional<Classifier> model,
                                       double threshold);

}  // namespace asr

#endif  // ASR_DETECTOR_HPP_
