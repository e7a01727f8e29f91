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

#ifndef ASR_ENGINE_HPP_
#define ASR_ENGINE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "asr/audio_io.hpp"
#include "asr/detector.hpp"
#include "asr/events.hpp"

namespace asr {

struct WorkUnit {
  std::size_t entry_index = 0;
  std::size_t unit_index = 0;  // position within the entry
  std::string path;
  std::string channel_id;
  int channel_index = 0;
  double entry_start_s = 0.0;
  double entry_duration_s = 0.0;
  // Segment within the entry, seconds from the entry start.
  double seg_t0_s = 0.0;
  double seg_t1_s = 0.0;
  double overlap_s = 0.0;
  // End of the part of the segment not shared with the next unit.
  double core_t1_s = 0.0;
  bool first_in_entry = true;
  bool last_in_entry = true;
  std::string fingerprint;
};

// Tiles each entry with units of unit_duration_s stepping by
// unit_duration_s - overlap_s. A trailing partial unit shorter than
// 2 * overlap_s is folded into its predecessor.
std::vector<WorkUnit> Partition(const ArchiveManifest& manifest,
                                double unit_duration_s, double overlap_s,
                                const std::string& fingerprint = "");

struct UnitResult {
  WorkUnit unit;
  std::vector<DetectionEvent> events;  // absolute times
  bool ok = true;
  std::string error;
  double seconds = 0.0;
};

// Drops events that may be truncated by a unit edge (within edge_guard_s of
// an interior edge), then removes duplicates across overlaps: a later-unit
// event of the same channel and kind whose interval intersects an
// earlier-unit event and whose onset lies in the shared zone is discarded.
// Output is canonically ordered and independent of input order.
std::vector<DetectionEvent> MergeResults(std::vector<UnitResult> results,
                                         double edge_guard_s);

struct UnitTiming {
  std::size_t unit = 0;
  double seconds = 0.0;
  std::size_t events = 0;
  bool ok = true;
  std::string error;
};

struct RunReport {
  double channel_hours_processed = 0.0;
  double wall_seconds = 0.0;
  int workers = 1;
  double throughput_multiplier = 0.0;
  std::vector<UnitTiming> units;
  std::size_t events_before_merge = 0;
  std::size_t events_after_merge = 0;
  std::size_t failed_units = 0;
};

// Channel-hours per wall-hour; 0 when no time elapsed.
double ThroughputMultiplier(double channel_hours, double wall_seconds);

std::string RunReportToJson(const RunReport& report);

struct BatchOutput {
  std::vector<DetectionEvent> events;
  RunReport report;
};

// Executes every unit on up to `workers` threads. A failing unit is recorded
// in the report and contributes no events.
BatchOutput RunBatch(const std::vector<WorkUnit>& units, int workers,
                     const Pipeline& pipeline);

struct RunConfig {
  std::string pipeline = "fm-cra";
  std::string params_json;  // pipeline parameters, may be empty
  std::string model_path;   // optional classifier
  double threshold = 0.5;
  double unit_duration_s = 600.0;
  double overlap_s = 60.0;
  int workers = 1;
};

RunConfig ParseRunConfig(const std::string& json_text,
                         const std::string& base_dir = "");

}  // namespace asr

#endif  // ASR_ENGINE_HPP_
