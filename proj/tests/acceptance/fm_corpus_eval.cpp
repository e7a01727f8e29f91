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

#include "fm_corpus_eval.hpp"

#include <limits>

namespace asr::testing {

Corpus RenderCorpus(const SceneSpec& spec, const std::string& kind) {
  RenderedScene scene = RenderScene(spec);
  Corpus c;
  c.clip = std::move(scene.clip);
  for (auto& t : scene.truth) {
    if (t.kind == kind) c.truth.push_back(std::move(t));
  }
  return c;
}

Classifier TrainFmBranch(const FmConfig& config, const Corpus& train,
                         std::size_t n_noise, std::uint64_t seed,
                         std::size_t* positives, std::size_t* negatives) {
  const FmDetector det(config);
  TrainingSet candidates;
  HarvestOptions opt;
  opt.seed = seed;
  HarvestFm(det, train.clip, train.truth, opt, &candidates);
  TrainingSet set = candidates;
  if (candidates.negatives() < n_noise) {
    // Random boxes come after the candidates, so only the tail is new.
    TrainingSet topped;
    opt.random_negatives = static_cast<int>(n_noise - candidates.negatives());
    HarvestFm(det, train.clip, train.truth, opt, &topped);
    for (std::size_t i = candidates.x.size(); i < topped.x.size(); ++i) {
      set.x.push_back(topped.x[i]);
      set.y.push_back(topped.y[i]);
    }
  }
  if (positives) *positives = set.positives();
  if (negatives) *negatives = set.negatives();
  Classifier model;
  if (config.branch == FmBranch::kCra) {
    model.kind = Classifier::Kind::kMlp;
    MlpConfig mc;
    mc.seed = seed;
    model.mlp = MlpTrain(set.x, set.y, mc);
    model.threshold = 0.5;
  } else {
    model.kind = Classifier::Kind::kAdaBoost;
    std::vector<int> y;
    for (int v : set.y) y.push_back(v == 1 ? 1 : -1);
    model.adaboost = AdaBoostTrain(set.x, y, AdaBoostConfig{});
    model.threshold = 0.0;
  }
  return model;
}

std::vector<DetectionEvent> ScoreCorpora(const FmDetector& detector,
                                         const Classifier& model,
                                         const std::vector<Corpus>& corpora) {
  std::vector<DetectionEvent> all;
  for (const Corpus& c : corpora) {
    auto dets = detector.Detect(c.clip, &model, -std::numeric_limits<double>::infinity());
    all.insert(all.end(), dets.begin(), dets.end());
  }
  return all;
}

OperatingPoint BestOperatingPoint(const std::vector<PrPoint>& curve,
                                  std::size_t n_truth, double hours,
                                  double max_fp_per_hour) {
  OperatingPoint best;
  best.threshold = std::numeric_limits<double>::infinity();
  for (const PrPoint& p : curve) {
    const double fph = static_cast<double>(p.fp) / hours;
    if (fph > max_fp_per_hour) continue;
    const double recall = n_truth ? static_cast<double>(p.tp) / n_truth : 0.0;
    if (recall > best.recall) best = {p.threshold, recall, fph, p.tp, p.fp};
  }
  return best;
}

}  // namespace asr::testing
