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

#include "asr/events.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"
#include "json.hpp"

namespace asr {

namespace {

const char* const kBaseColumns[] = {
    "Selection",      "Begin Time (s)", "End Time (s)", "Low Freq (Hz)",
    "High Freq (Hz)", "Label",          "Score",        "Channel"};
constexpr std::size_t kNumBase = 8;

bool HasFeatures(const std::vector<DetectionEvent>& events) {
  return std::any_of(events.begin(), events.end(),
                     [](const DetectionEvent& e) { return e.features.has_value(); });
}

std::string JoinFeatures(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += FormatDouble(v[i]);
  }
  return s;
}

}  // namespace

void ValidateEvent(const DetectionEvent& ev) {
  Require(ev.t0_s < ev.t1_s, "event " + ev.id + ": begin time must precede end time",
          ErrorCode::kValidation);
  Require(ev.f_lo_hz < ev.f_hi_hz, "event " + ev.id + ": low freq must be below high freq",
          ErrorCode::kValidation);
  Require(std::isfinite(ev.score), "event " + ev.id + ": non-finite score",
          ErrorCode::kValidation);
}

std::string EventsToTsv(const std::vector<DetectionEvent>& events) {
  const bool with_source = std::any_of(events.begin(), events.end(),
                                       [](const auto& e) { return !e.source.empty(); });
  const bool with_features = HasFeatures(events);
  const bool with_predicted = std::any_of(
      events.begin(), events.end(), [](const auto& e) { return e.predicted_score.has_value(); });
  std::string out;
  for (std::size_t i = 0; i < kNumBase; ++i) {
    if (i) out += '\t';
    out += kBaseColumns[i];
  }
  if (with_source) out += "\tSource";
  if (with_features) out += "\tFingerprint\tFeatures";
  if (with_predicted) out += "\tPredicted Score";
  out += '\n';
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    out += e.id.empty() ? std::to_string(k + 1) : e.id;
    out += '\t' + FormatDouble(e.t0_s) + '\t' + FormatDouble(e.t1_s) + '\t' +
           FormatDouble(e.f_lo_hz) + '\t' + FormatDouble(e.f_hi_hz) + '\t' + e.kind +
           '\t' + FormatDouble(e.score) + '\t' + e.channel_id;
    if (with_source) out += '\t' + e.source;
    if (with_features) {
      out += '\t';
      if (e.features) out += e.features->fingerprint + '\t' + JoinFeatures(e.features->values);
      else out += '\t';
    }
    if (with_predicted) {
      out += '\t';
      if (e.predicted_score) out += FormatDouble(*e.predicted_score);
    }
    out += '\n';
  }
  return out;
}

std::vector<DetectionEvent> EventsFromTsv(const std::string& text,
                                          const std::string& context) {
  std::vector<DetectionEvent> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> col;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = SplitString(line, '\t');
    if (col.empty()) {
      for (std::size_t i = 0; i < cells.size(); ++i) col[Trim(cells[i])] = i;
      for (const char* name : kBaseColumns) {
        if (!col.count(name)) {
          Fail(ErrorCode::kParse, context + ": header lacks column '" + name + "'");
        }
      }
      continue;
    }
    const std::string where = context + " line " + std::to_string(line_no);
    if (cells.size() < kNumBase) {
      Fail(ErrorCode::kParse, where + ": expected at least 8 columns");
    }
    auto cell = [&](const char* name) -> std::string {
      auto it = col.find(name);
      if (it == col.end() || it->second >= cells.size()) return {};
      return cells[it->second];
    };
    DetectionEvent e;
    e.id = Trim(cell("Selection"));
    e.t0_s = ParseDouble(cell("Begin Time (s)"), where);
    e.t1_s = ParseDouble(cell("End Time (s)"), where);
    e.f_lo_hz = ParseDouble(cell("Low Freq (Hz)"), where);
    e.f_hi_hz = ParseDouble(cell("High Freq (Hz)"), where);
    e.kind = Trim(cell("Label"));
    e.score = ParseDouble(cell("Score"), where);
    e.channel_id = Trim(cell("Channel"));
    e.source = Trim(cell("Source"));
    const std::string feats = Trim(cell("Features"));
    if (!feats.empty()) {
      FeatureVector fv;
      fv.fingerprint = Trim(cell("Fingerprint"));
      for (const auto& tok : SplitString(feats, ',')) fv.values.push_back(ParseDouble(tok, where));
      e.features = std::move(fv);
    }
    const std::string pred = Trim(cell("Predicted Score"));
    if (!pred.empty()) e.predicted_score = ParseDouble(pred, where);
    try {
      ValidateEvent(e);
    } catch (const Error& err) {
      Fail(ErrorCode::kValidation, where + ": " + err.what());
    }
    out.push_back(std::move(e));
  }
  if (col.empty()) Fail(ErrorCode::kParse, context + ": missing header");
  return out;
}

std::vector<DetectionEvent> ReadEventsTsv(const std::string& path) {
  return EventsFromTsv(ReadTextFile(path), path);
}

void WriteEventsTsv(const std::string& path, const std::vector<DetectionEvent>& events) {
  AtomicWriteFile(path, EventsToTsv(events));
}

std::string EventsToJsonLines(const std::vector<DetectionEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["channel_id"] = e.channel_id;
    j["t0_s"] = e.t0_s;
    j["t1_s"] = e.t1_s;
    j["f_lo_hz"] = e.f_lo_hz;
    j["f_hi_hz"] = e.f_hi_hz;
    j["kind"] = e.kind;
    j["score"] = e.score;
    j["source"] = e.source;
    if (e.features) {
      j["fingerprint"] = e.features->fingerprint;
      j["features"] = e.features->values;
    }
    if (e.predicted_score) j["predicted_score"] = *e.predicted_score;
    out += j.dump() + "\n";
  }
  return out;
}

void CanonicalizeEvents(std::vector<DetectionEvent>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const DetectionEvent& a, const DetectionEvent& b) {
                     return std::tie(a.channel_id, a.t0_s, a.kind, a.t1_s, a.f_lo_hz,
                                     a.f_hi_hz, a.score) <
                            std::tie(b.channel_id, b.t0_s, b.kind, b.t1_s, b.f_lo_hz,
                                     b.f_hi_hz, b.score);
                   });
  for (std::size_t i = 0; i < events.size(); ++i) events[i].id = std::to_string(i + 1);
}

}  // namespace asr
