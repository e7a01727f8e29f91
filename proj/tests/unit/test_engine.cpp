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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "asr/engine.hpp"
#include "asr/error.hpp"
#include "asr/synth.hpp"
#include "corpus.hpp"
#include "doctest.h"

using namespace asr;

namespace {

ArchiveManifest OneEntry(double duration_s) {
  ArchiveManifest m;
  m.epoch = "2009-03-28T00:00:00Z";
  m.entries.push_back({"a.wav", "a:0", 0.0, duration_s});
  return m;
}

DetectionEvent Ev(double t0, double t1, std::string ch = "a:0") {
  DetectionEvent e;
  e.channel_id = std::move(ch);
  e.t0_s = t0;
  e.t1_s = t1;
  e.f_lo_hz = 90;
  e.f_hi_hz = 210;
  e.kind = "upcall";
  e.score = 1.0;
  return e;
}

// Two channels of up-calls, written as WAV files.
ArchiveManifest WriteCorpus(const std::string& tag) {
  ArchiveManifest m;
  m.epoch = "2009-03-28T00:00:00Z";
  for (int ch = 0; ch < 2; ++ch) {
    asr::testing::FmCorpusOptions o;
    o.duration_s = 180.0;
    o.n_calls = 12;
    o.snr_lo_db = 12.0;
    o.snr_hi_db = 20.0;
    o.seed = 200 + ch;
    SceneSpec spec = asr::testing::FmCorpus(o);
    spec.channel_id = "ch" + std::to_string(ch) + ":0";
    const auto scene = RenderScene(spec);
    const std::string path = asr::testing::TempPath(tag + std::to_string(ch) + ".wav");
    WriteWav(path, scene.clip);
    m.entries.push_back({path, spec.channel_id, 1000.0 * ch, spec.duration_s});
  }
  return m;
}

}  // namespace

TEST_CASE("partition examples") {
  CHECK(Partition(OneEntry(36000.0), 3600.0, 0.0).size() == 10);
  const auto u = Partition(OneEntry(5400.0), 3600.0, 0.0);
  REQUIRE(u.size() == 2);
  CHECK(u[0].seg_t1_s - u[0].seg_t0_s == 3600.0);
  CHECK(u[1].seg_t1_s - u[1].seg_t0_s == 1800.0);
  CHECK(Partition(OneEntry(100.0), 600.0, 60.0).size() == 1);
  CHECK_THROWS_AS(Partition(OneEntry(100.0), 60.0, 60.0), Error);
  CHECK_THROWS_AS(Partition(OneEntry(100.0), 60.0, -1.0), Error);
}

TEST_CASE("short trailing pieces fold into the previous unit") {
  // Steps of 540 s: the last piece [1620, 1700) is shorter than 120 s.
  const auto u = Partition(OneEntry(1700.0), 600.0, 60.0);
  REQUIRE(u.size() == 3);
  CHECK(u.back().seg_t1_s == 1700.0);
  CHECK(u.back().last_in_entry);
}

TEST_CASE("unit cores tile every entry exactly") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    ArchiveManifest m;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < n; ++e) {
      m.entries.push_back({"f" + std::to_string(e), "c" + std::to_string(e), 0.0,
                           10.0 + static_cast<double>(rng() % 5000)});
    }
    const double unit = 60.0 + static_cast<double>(rng() % 600);
    const double overlap = static_cast<double>(rng() % 60);
    const auto units = Partition(m, unit, overlap, "fp");
    for (int e = 0; e < n; ++e) {
      double cursor = 0.0;
      for (const auto& u : units) {
        if (u.entry_index != static_cast<std::size_t>(e)) continue;
        CHECK(u.seg_t0_s == cursor);
        CHECK(u.core_t1_s > u.seg_t0_s);
        CHECK(u.seg_t1_s <= m.entries[e].duration_s);
        CHECK(u.core_t1_s <= u.seg_t1_s);
        CHECK(u.fingerprint == "fp");
        cursor = u.core_t1_s;
      }
      CHECK(cursor == m.entries[e].duration_s);
    }
  }
}

TEST_CASE("merge removes overlap duplicates once") {
  const auto units = Partition(OneEntry(1100.0), 600.0, 60.0);
  REQUIRE(units.size() == 2);
  // Unit 0 covers [0, 600), unit 1 covers [540, 1100).
  std::vector<UnitResult> results(2);
  results[0].unit = units[0];
  results[1].unit = units[1];
  results[0].events = {Ev(100, 102), Ev(560, 562)};
  results[1].events = {Ev(560.05, 562.05), Ev(900, 902)};
  const auto merged = MergeResults(results, 5.0);
  REQUIRE(merged.size() == 3);
  CHECK(merged[1].t0_s == 560.0);

  std::reverse(results.begin(), results.end());
  std::reverse(results[0].events.begin(), results[0].events.end());
  CHECK(EventsToTsv(MergeResults(results, 5.0)) == EventsToTsv(merged));
}

TEST_CASE("merge of disjoint units is the sorted concatenation") {
  ArchiveManifest m = OneEntry(100.0);
  m.entries.push_back({"b.wav", "b:0", 0.0, 100.0});
  const auto units = Partition(m, 600.0, 60.0);
  REQUIRE(units.size() == 2);
  std::vector<UnitResult> results(2);
  results[0].unit = units[1];
  results[0].events = {Ev(50, 51, "b:0"), Ev(10, 11, "b:0")};
  results[1].unit = units[0];
  results[1].events = {Ev(30, 31)};
  const auto merged = MergeResults(results, 5.0);
  REQUIRE(merged.size() == 3);
  CHECK(merged[0].channel_id == "a:0");
  CHECK(merged[1].t0_s == 10.0);
  CHECK(merged[2].t0_s == 50.0);
}

TEST_CASE("events near interior edges are dropped") {
  const auto units = Partition(OneEntry(1100.0), 600.0, 60.0);
  std::vector<UnitResult> results(1);
  results[0].unit = units[0];
  results[0].events = {Ev(597, 599.5)};
  CHECK(MergeResults(results, 5.0).empty());
}

TEST_CASE("throughput arithmetic") {
  CHECK(ThroughputMultiplier(64.0, 3600.0) == 64.0);
  CHECK(ThroughputMultiplier(1.0, 0.0) == 0.0);
}

TEST_CASE("an empty batch produces an empty report") {
  const auto p = MakePipeline("fm-cra", "", std::nullopt, 0.5);
  const auto out = RunBatch({}, 4, *p);
  CHECK(out.events.empty());
  CHECK(out.report.channel_hours_processed == 0.0);
  CHECK(out.report.units.empty());
  CHECK_THROWS_AS(RunBatch({}, 0, *p), Error);
}

TEST_CASE("batch output does not depend on worker count") {
  const auto m = WriteCorpus("workers");
  const auto p = MakePipeline("fm-cra", "", std::nullopt, 0.5);
  const auto units = Partition(m, 50.0, 10.0, p->Fingerprint());
  const auto serial = RunBatch(units, 1, *p);
  const auto parallel = RunBatch(units, 4, *p);
  CHECK(!serial.events.empty());
  CHECK(EventsToTsv(serial.events) == EventsToTsv(parallel.events));
  CHECK(serial.report.channel_hours_processed == doctest::Approx(360.0 / 3600.0));
  CHECK(serial.report.failed_units == 0);
  CHECK(serial.report.units.size() == units.size());
}

TEST_CASE("a failing unit is isolated") {
  auto m = WriteCorpus("isolate");
  m.entries.push_back({asr::testing::TempPath("missing.wav"), "zz:0", 0.0, 60.0});
  const auto p = MakePipeline("fm-cra", "", std::nullopt, 0.5);
  const auto units = Partition(m, 50.0, 10.0);
  const auto good = Partition(WriteCorpus("isolate"), 50.0, 10.0);
  const auto out = RunBatch(units, 2, *p);
  CHECK(out.report.failed_units == 2);
  CHECK(EventsToTsv(out.events) == EventsToTsv(RunBatch(good, 1, *p).events));
  const auto json = RunReportToJson(out.report);
  CHECK(json.find("\"error\"") != std::string::npos);
}

TEST_CASE("units built for another pipeline are refused") {
  const auto p = MakePipeline("fm-cra", "", std::nullopt, 0.5);
  const auto units = Partition(OneEntry(100.0), 50.0, 10.0, "other");
  CHECK_THROWS_AS(RunBatch(units, 1, *p), Error);
}

TEST_CASE("run configuration") {
  const auto c = ParseRunConfig(R"({"pipeline": "pt", "params": {"nu": 2}, "model": "m.json", "workers": 3})",
                                "/data");
  CHECK(c.pipeline == "pt");
  CHECK(c.params_json == R"({"nu":2})");
  CHECK(c.model_path == "/data/m.json");
  CHECK(c.workers == 3);
  CHECK(c.overlap_s == 60.0);
  CHECK_THROWS_AS(ParseRunConfig(R"({"colour": 1})"), Error);
  CHECK_THROWS_AS(ParseRunConfig(R"({"workers": 0})"), Error);
  CHECK_THROWS_AS(ParseRunConfig("{"), Error);
}
