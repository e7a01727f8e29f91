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

#include "asr/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <thread>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"
#include "json.hpp"

namespace asr {

std::vector<WorkUnit> Partition(const ArchiveManifest& manifest, double unit_duration_s,
                                double overlap_s, const std::string& fingerprint) {
  Require(std::isfinite(unit_duration_s) && std::isfinite(overlap_s) && overlap_s >= 0 &&
              unit_duration_s > overlap_s,
          "unit duration must exceed the overlap, and the overlap must be nonnegative");
  const double step = unit_duration_s - overlap_s;
  std::vector<WorkUnit> units;
  for (std::size_t e = 0; e < manifest.entries.size(); ++e) {
    const ManifestEntry& entry = manifest.entries[e];
    const double d = entry.duration_s;
    std::vector<std::pair<double, double>> segs;
    for (std::size_t k = 0;; ++k) {
      const double t0 = static_cast<double>(k) * step;
      const double t1 = std::min(t0 + unit_duration_s, d);
      segs.emplace_back(t0, t1);
      if (t1 >= d) break;
    }
    if (segs.size() > 1 && segs.back().second - segs.back().first < 2.0 * overlap_s) {
      segs.pop_back();
      segs.back().second = d;
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
      WorkUnit u;
      u.entry_index = e;
      u.unit_index = k;
      u.path = entry.path;
      u.channel_id = entry.channel_id;
      u.channel_index = entry.channel_index;
      u.entry_start_s = entry.start_time_s;
      u.entry_duration_s = d;
      u.seg_t0_s = segs[k].first;
      u.seg_t1_s = segs[k].second;
      u.overlap_s = overlap_s;
      u.first_in_entry = k == 0;
      u.last_in_entry = k + 1 == segs.size();
      u.core_t1_s = u.last_in_entry ? d : segs[k + 1].first;
      u.fingerprint = fingerprint;
      units.push_back(std::move(u));
    }
  }
  return units;
}

std::vector<DetectionEvent> MergeResults(std::vector<UnitResult> results, double edge_guard_s) {
  Require(edge_guard_s >= 0, "edge guard must be nonnegative");
  std::sort(results.begin(), results.end(), [](const UnitResult& a, const UnitResult& b) {
    return std::tie(a.unit.entry_index, a.unit.unit_index) <
           std::tie(b.unit.entry_index, b.unit.unit_index);
  });
  std::set<std::pair<std::size_t, std::size_t>> failed;
  for (const auto& r : results) {
    if (!r.ok) failed.insert({r.unit.entry_index, r.unit.unit_index});
  }

  std::vector<DetectionEvent> merged;
  std::vector<DetectionEvent> previous;  // kept events of the preceding unit
  const UnitResult* prev_unit = nullptr;
  for (auto& r : results) {
    if (!r.ok) {
      previous.clear();
      prev_unit = nullptr;
      continue;
    }
    const WorkUnit& u = r.unit;
    const double a0 = u.entry_start_s + u.seg_t0_s;
    const double a1 = u.entry_start_s + u.seg_t1_s;
    const bool left_interior = !u.first_in_entry && !failed.count({u.entry_index, u.unit_index - 1});
    const bool right_interior =
        !u.last_in_entry && !failed.count({u.entry_index, u.unit_index + 1});
    CanonicalizeEvents(r.events);
    const bool adjacent = prev_unit && prev_unit->unit.entry_index == u.entry_index &&
                          prev_unit->unit.unit_index + 1 == u.unit_index;
    const double shared_end = adjacent ? prev_unit->unit.entry_start_s + prev_unit->unit.seg_t1_s
                                       : a0;
    std::vector<DetectionEvent> kept;
    for (auto& ev : r.events) {
      if (left_interior && ev.t0_s < a0 + edge_guard_s) continue;
      if (right_interior && ev.t1_s > a1 - edge_guard_s) continue;
      bool duplicate = false;
      if (adjacent && ev.t0_s >= a0 && ev.t0_s <= shared_end) {
        for (const auto& p : previous) {
          if (p.channel_id == ev.channel_id && p.kind == ev.kind && p.t0_s < ev.t1_s &&
              ev.t0_s < p.t1_s) {
            duplicate = true;
            break;
          }
        }
      }
      if (!duplicate) kept.push_back(std::move(ev));
    }
    merged.insert(merged.end(), kept.begin(), kept.end());
    previous = std::move(kept);
    prev_unit = &r;
  }
  CanonicalizeEvents(merged);
  return merged;
}

double ThroughputMultiplier(double channel_hours, double wall_seconds) {
  if (wall_seconds <= 0) return 0.0;
  return channel_hours / (wall_seconds / 3600.0);
}

std::string RunReportToJson(const RunReport& r) {
  nlohmann::ordered_json j;
  j["channel_hours_processed"] = r.channel_hours_processed;
  j["wall_seconds"] = r.wall_seconds;
  j["workers"] = r.workers;
  j["throughput_multiplier"] = r.throughput_multiplier;
  j["events_before_merge"] = r.events_before_merge;
  j["events_after_merge"] = r.events_after_merge;
  j["failed_units"] = r.failed_units;
  auto units = nlohmann::ordered_json::array();
  for (const auto& u : r.units) {
    nlohmann::ordered_json ju;
    ju["unit"] = u.unit;
    ju["seconds"] = u.seconds;
    ju["events"] = u.events;
    ju["ok"] = u.ok;
    if (!u.ok) ju["error"] = u.error;
    units.push_back(ju);
  }
  j["units"] = units;
  return j.dump(2) + "\n";
}

namespace {

UnitResult RunUnit(const WorkUnit& u, const Pipeline& pipeline) {
  UnitResult r;
  r.unit = u;
  const auto start = std::chrono::steady_clock::now();
  try {
    AudioClip clip = ReadWavSegment(u.path, u.channel_index, u.seg_t0_s, u.seg_t1_s);
    clip.channel_id = u.channel_id;
    clip.start_time_s = u.entry_start_s + u.seg_t0_s;
    r.events = pipeline.Run(clip);
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    r.events.clear();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

BatchOutput RunBatch(const std::vector<WorkUnit>& units, int workers, const Pipeline& pipeline) {
  Require(workers >= 1, "workers must be at least 1");
  const std::string fp = pipeline.Fingerprint();
  for (const auto& u : units) {
    Require(u.fingerprint.empty() || u.fingerprint == fp,
            "work unit fingerprint " + u.fingerprint + " does not match pipeline " + fp,
            ErrorCode::kMismatch);
  }
  std::vector<UnitResult> results(units.size());
  const auto start = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      results[i] = RunUnit(units[i], pipeline);
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(workers), units.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  BatchOutput out;
  RunReport& rep = out.report;
  rep.workers = workers;
  rep.wall_seconds = wall;
  double seconds = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const UnitResult& r = results[i];
    rep.units.push_back({i, r.seconds, r.events.size(), r.ok, r.error});
    rep.events_before_merge += r.events.size();
    if (r.ok) {
      seconds += r.unit.core_t1_s - r.unit.seg_t0_s;
    } else {
      ++rep.failed_units;
    }
  }
  rep.channel_hours_processed = seconds / 3600.0;
  rep.throughput_multiplier = ThroughputMultiplier(rep.channel_hours_processed, wall);
  out.events = MergeResults(std::move(results), pipeline.EdgeGuardSeconds());
  rep.events_after_merge = out.events.size();
  return out;
}

RunConfig ParseRunConfig(const std::string& json_text, const std::string& base_dir) {
  using nlohmann::json;
  RunConfig c;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("run configuration: ") + e.what());
  }
  Require(j.is_object(), "run configuration must be a JSON object", ErrorCode::kParse);
  static const std::set<std::string> known = {"pipeline", "params",         "model",    "threshold",
                                              "unit_duration_s", "overlap_s", "workers"};
  for (const auto& [k, v] : j.items()) {
    Require(known.count(k) > 0, "run configuration: unknown key '" + k + "'", ErrorCode::kParse);
  }
  try {
    c.pipeline = j.value("pipeline", c.pipeline);
    if (j.contains("params")) {
      const json& p = j.at("params");
      c.params_json = p.is_string() ? p.get<std::string>() : p.dump();
    }
    c.model_path = j.value("model", c.model_path);
    c.threshold = j.value("threshold", c.threshold);
    c.unit_duration_s = j.value("unit_duration_s", c.unit_duration_s);
    c.overlap_s = j.value("overlap_s", c.overlap_s);
    c.workers = j.value("workers", c.workers);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("run configuration: ") + e.what());
  }
  if (!c.model_path.empty() && !base_dir.empty() &&
      std::filesystem::path(c.model_path).is_relative()) {
    c.model_path = (std::filesystem::path(base_dir) / c.model_path).string();
  }
  Require(c.workers >= 1, "run configuration: workers must be at least 1");
  Require(c.unit_duration_s > c.overlap_s && c.overlap_s >= 0,
          "run configuration: unit_duration_s must exceed overlap_s >= 0");
  return c;
}

}  // namespace asr
