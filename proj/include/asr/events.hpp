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

#ifndef ASR_EVENTS_HPP_
#define ASR_EVENTS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "asr/feature_vector.hpp"

namespace asr {

// A labeled, scored time-frequency event. Truth annotations use the same
// type with score 1.
struct DetectionEvent {
  std::string id;  // "Selection" column
  std::string channel_id;
  double t0_s = 0.0;
  double t1_s = 0.0;
  double f_lo_hz = 0.0;
  double f_hi_hz = 0.0;
  std::string kind;
  double score = 0.0;
  std::string source;
  std::optional<FeatureVector> features;
  std::optional<double> predicted_score;

  double duration_s() const { return t1_s - t0_s; }
};

void ValidateEvent(const DetectionEvent& ev);

// Selection-table TSV. The first eight columns are fixed:
//   Selection, Begin Time (s), End Time (s), Low Freq (Hz), High Freq (Hz),
//   Label, Score, Channel
// Optional trailing columns, recognised by header name: Source, Fingerprint,
// Features (comma-separated), Predicted Score.
std::string EventsToTsv(const std::vector<DetectionEvent>& events);
std::vector<DetectionEvent> EventsFromTsv(const std::string& text,
                                          const std::string& context = "tsv");
std::vector<DetectionEvent> ReadEventsTsv(const std::string& path);
void WriteEventsTsv(const std::string& path,
                    const std::vector<DetectionEvent>& events);

// One JSON object per line.
std::string EventsToJsonLines(const std::vector<DetectionEvent>& events);

// Sort by (channel, t0, kind, t1, f_lo, f_hi, score) and renumber ids 1..n.
void CanonicalizeEvents(std::vector<DetectionEvent>& events);

}  // namespace asr

#endif  // ASR_EVENTS_HPP_
