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

#ifndef ASR_FUSION_HPP_
#define ASR_FUSION_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "asr/classify.hpp"
#include "asr/events.hpp"

namespace asr {

inline constexpr int kMinHumanScore = 0;
inline constexpr int kMaxHumanScore = 4;

struct HumanScore {
  std::string event_id;
  std::string analyst_id;
  int score = 0;
};

// TSV with header "event_id analyst_id score". When known_event_ids is given,
// rows naming other events are rejected. Errors carry the 1-based line number.
std::vector<HumanScore> ParseScores(
    const std::string& text, const std::set<std::string>* known_event_ids,
    const std::string& context = "scores");
std::vector<HumanScore> LoadScores(
    const std::string& path,
    const std::set<std::string>* known_event_ids = nullptr);
std::string ScoresToTsv(const std::vector<HumanScore>& scores);

// Mean score per event.
std::map<std::string, double> ConsensusScores(
    const std::vector<HumanScore>& scores);

// Regresses consensus scores (mapped to [0, 1]) on event features. Events
// without a consensus score are ignored; all used events must share one
// feature fingerprint.
Classifier FusionTrain(const std::vector<DetectionEvent>& events,
                       const std::map<std::string, double>& consensus,
                       const MlpConfig& config);

// Predicted score in [score_min, score_max].
double FusionPredict(const Classifier& model, const DetectionEvent& event);

// Events whose predicted score is strictly above min_score, each carrying its
// predicted_score.
std::vector<DetectionEvent> ScoreFilter(
    const std::vector<DetectionEvent>& events, const Classifier& model,
    double min_score);

}  // namespace asr

#endif  // ASR_FUSION_HPP_
