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

#include "asr/fusion.hpp"

#include <algorithm>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"

namespace asr {

std::vector<HumanScore> ParseScores(const std::string& text,
                                    const std::set<std::string>* known_event_ids,
                                    const std::string& context) {
  std::vector<HumanScore> out;
  std::set<std::pair<std::string, std::string>> seen;
  const auto lines = SplitString(text, '\n');
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const std::string where = context + ":" + std::to_string(i + 1);
    const auto fields = SplitString(line, '\t');
    if (!header_seen) {
      Require(fields.size() == 3 && Trim(fields[0]) == "event_id" &&
                  Trim(fields[1]) == "analyst_id" && Trim(fields[2]) == "score",
              where + ": expected header 'event_id<TAB>analyst_id<TAB>score'", ErrorCode::kParse);
      header_seen = true;
      continue;
    }
    Require(fields.size() == 3, where + ": expected 3 fields, found " + std::to_string(fields.size()),
            ErrorCode::kParse);
    HumanScore s;
    s.event_id = Trim(fields[0]);
    s.analyst_id = Trim(fields[1]);
    Require(!s.event_id.empty() && !s.analyst_id.empty(), where + ": empty identifier",
            ErrorCode::kParse);
    const long long v = ParseInt(Trim(fields[2]), where + " score");
    Require(v >= kMinHumanScore && v <= kMaxHumanScore,
            where + ": score " + std::to_string(v) + " outside [" + std::to_string(kMinHumanScore) +
                ", " + std::to_string(kMaxHumanScore) + "]",
            ErrorCode::kValidation);
    s.score = static_cast<int>(v);
    Require(seen.insert({s.event_id, s.analyst_id}).second,
            where + ": duplicate score for event '" + s.event_id + "' by analyst '" +
                s.analyst_id + "'",
            ErrorCode::kValidation);
    if (known_event_ids) {
      Require(known_event_ids->count(s.event_id) > 0,
              where + ": unknown event_id '" + s.event_id + "'", ErrorCode::kValidation);
    }
    out.push_back(std::move(s));
  }
  Require(header_seen, context + ": missing header", ErrorCode::kParse);
  return out;
}

std::vector<HumanScore> LoadScores(const std::string& path,
                                   const std::set<std::string>* known_event_ids) {
  return ParseScores(ReadTextFile(path), known_event_ids, path);
}

std::string ScoresToTsv(const std::vector<HumanScore>& scores) {
  std::string out = "event_id\tanalyst_id\tscore\n";
  for (const auto& s : scores) {
    out += s.event_id + "\t" + s.analyst_id + "\t" + std::to_string(s.score) + "\n";
  }
  return out;
}

std::map<std::string, double> ConsensusScores(const std::vector<HumanScore>& scores) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& s : scores) {
    auto& a = acc[s.event_id];
    a.first += s.score;
    a.second += 1;
  }
  std::map<std::string, double> out;
  for (const auto& [id, a] : acc) out[id] = a.first / a.second;
  return out;
}

Classifier FusionTrain(const std::vector<DetectionEvent>& events,
                       const std::map<std::string, double>& consensus, const MlpConfig& config) {
  std::vector<FeatureVector> x;
  std::vector<double> targets;
  const double range = kMaxHumanScore - kMinHumanScore;
  for (const auto& ev : events) {
    const auto it = consensus.find(ev.id);
    if (it == consensus.end()) continue;
    Require(ev.features.has_value(), "event '" + ev.id + "' has no attached features");
    Require(it->second >= kMinHumanScore && it->second <= kMaxHumanScore,
            "consensus score for '" + ev.id + "' is outside the score range",
            ErrorCode::kValidation);
    x.push_back(*ev.features);
    targets.push_back((it->second - kMinHumanScore) / range);
  }
  Require(!x.empty(), "no event has a human score", ErrorCode::kDegenerate);
  Classifier c;
  c.kind = Classifier::Kind::kFusion;
  c.score_min = kMinHumanScore;
  c.score_max = kMaxHumanScore;
  c.threshold = 3.0;
  if (x.size() == 1) {
    // A single example still needs two rows for scaling statistics.
    x.push_back(x[0]);
    targets.push_back(targets[0]);
  }
  c.mlp = MlpFit(x, targets, {}, config);
  return c;
}

double FusionPredict(const Classifier& model, const DetectionEvent& event) {
  Require(model.kind == Classifier::Kind::kFusion, "model is not a fusion model");
  Require(event.features.has_value(), "event '" + event.id + "' has no attached features");
  return model.Score(*event.features);
}

std::vector<DetectionEvent> ScoreFilter(const std::vector<DetectionEvent>& events,
                                        const Classifier& model, double min_score) {
  std::vector<DetectionEvent> out;
  for (const auto& ev : events) {
    const double s = FusionPredict(model, ev);
    if (s > min_score) {
      out.push_back(ev);
      out.back().predicted_score = s;
    }
  }
  return out;
}

}  // namespace asr
