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
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "asr/error.hpp"
#include "asr/events.hpp"
#include "asr/fileutil.hpp"
#include "corpus.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace asr;

namespace {

const char* kHeader =
    "Selection\tBegin Time (s)\tEnd Time (s)\tLow Freq (Hz)\tHigh Freq (Hz)\tLabel\tScore\tChannel\n";

DetectionEvent Ev(std::string ch, double t0, double t1, double score = 0.5) {
  DetectionEvent e;
  e.channel_id = std::move(ch);
  e.t0_s = t0;
  e.t1_s = t1;
  e.f_lo_hz = 90;
  e.f_hi_hz = 210;
  e.kind = "upcall";
  e.score = score;
  return e;
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an asr::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("TSV round trip is exact") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::vector<DetectionEvent> events;
  for (int i = 0; i < 50; ++i) {
    const double t0 = u(rng);
    DetectionEvent e = Ev("f.wav:" + std::to_string(i % 3), t0, t0 + u(rng) / 100 + 1e-3, u(rng) / 1000);
    e.id = std::to_string(i + 1);
    e.source = i % 2 ? "fm-cra" : "";
    if (i % 5 == 0) e.features = FeatureVector{{u(rng), -u(rng), 1e-300}, "gridmask:5x8"};
    if (i % 7 == 0) e.predicted_score = u(rng) / 250;
    events.push_back(e);
  }
  const auto back = EventsFromTsv(EventsToTsv(events));
  REQUIRE(back.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(back[i].id == events[i].id);
    CHECK(back[i].channel_id == events[i].channel_id);
    CHECK(back[i].t0_s == events[i].t0_s);
    CHECK(back[i].t1_s == events[i].t1_s);
    CHECK(back[i].score == events[i].score);
    CHECK(back[i].source == events[i].source);
    CHECK(back[i].features == events[i].features);
    CHECK(back[i].predicted_score == events[i].predicted_score);
  }
  CHECK(EventsToTsv(back) == EventsToTsv(events));
}

TEST_CASE("base columns only when no optional fields are set") {
  const std::string tsv = EventsToTsv({Ev("c", 1, 2)});
  CHECK(tsv.substr(0, tsv.find('\n') + 1) == kHeader);
  CHECK(tsv.find("Source") == std::string::npos);
  CHECK(EventsToTsv({}) == kHeader);
}

TEST_CASE("columns are located by header name and CRLF is accepted") {
  const std::string text =
      "Channel\tScore\tLabel\tHigh Freq (Hz)\tLow Freq (Hz)\tEnd Time (s)\tBegin Time (s)\tSelection\r\n"
      "x:0\t0.75\tupcall\t200\t100\t3.5\t2\t7\r\n\r\n";
  const auto ev = EventsFromTsv(text);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].id == "7");
  CHECK(ev[0].t0_s == 2.0);
  CHECK(ev[0].t1_s == 3.5);
  CHECK(ev[0].channel_id == "x:0");
  CHECK(ev[0].score == 0.75);
}

TEST_CASE("parse and validation errors carry the line number") {
  CHECK(CodeOf([] { EventsFromTsv(""); }) == ErrorCode::kParse);
  CHECK(CodeOf([] { EventsFromTsv("Selection\tBegin Time (s)\n"); }) == ErrorCode::kParse);
  const std::string bad_number = std::string(kHeader) + "1\t0\t1\t10\t20\tx\t0.5\tc\n2\t0\tone\t10\t20\tx\t0.5\tc\n";
  try {
    EventsFromTsv(bad_number, "dets.tsv");
    FAIL("accepted a bad number");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("dets.tsv line 3") != std::string::npos);
  }
  const std::string reversed = std::string(kHeader) + "1\t5\t1\t10\t20\tx\t0.5\tc\n";
  CHECK(CodeOf([&] { EventsFromTsv(reversed); }) == ErrorCode::kValidation);
  const std::string short_row = std::string(kHeader) + "1\t0\t1\n";
  CHECK(CodeOf([&] { EventsFromTsv(short_row); }) == ErrorCode::kParse);
}

TEST_CASE("event validation") {
  CHECK_NOTHROW(ValidateEvent(Ev("c", 0, 1)));
  CHECK_THROWS_AS(ValidateEvent(Ev("c", 1, 1)), Error);
  DetectionEvent e = Ev("c", 0, 1);
  e.f_hi_hz = e.f_lo_hz;
  CHECK_THROWS_AS(ValidateEvent(e), Error);
  e = Ev("c", 0, 1, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(ValidateEvent(e), Error);
}

TEST_CASE("file round trip") {
  const std::string path = asr::testing::TempPath("events.tsv");
  WriteEventsTsv(path, {Ev("c", 1, 2), Ev("c", 3, 4)});
  CHECK(ReadEventsTsv(path).size() == 2);
  CHECK(CodeOf([] { ReadEventsTsv(asr::testing::TempPath("nope.tsv")); }) == ErrorCode::kNotFound);
}

TEST_CASE("JSON lines carry every field") {
  DetectionEvent e = Ev("c", 1, 2);
  e.id = "4";
  e.features = FeatureVector{{1.5, 2.5}, "fp"};
  e.predicted_score = 3.25;
  const std::string text = EventsToJsonLines({e, Ev("d", 5, 6)});
  const auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  CHECK(first["id"] == "4");
  CHECK(first["t1_s"] == 2.0);
  CHECK(first["features"] == nlohmann::json::array({1.5, 2.5}));
  CHECK(first["predicted_score"] == 3.25);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("canonical order and renumbering") {
  std::vector<DetectionEvent> ev = {Ev("b", 1, 2), Ev("a", 5, 6), Ev("a", 1, 3), Ev("a", 1, 2)};
  std::vector<DetectionEvent> shuffled = {ev[2], ev[0], ev[3], ev[1]};
  CanonicalizeEvents(ev);
  CanonicalizeEvents(shuffled);
  CHECK(EventsToTsv(ev) == EventsToTsv(shuffled));
  CHECK(ev[0].channel_id == "a");
  CHECK(ev[0].t1_s == 2.0);
  CHECK(ev[1].t1_s == 3.0);
  CHECK(ev[2].t0_s == 5.0);
  CHECK(ev[3].channel_id == "b");
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i].id == std::to_string(i + 1));
}

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -0.0}) {
    CHECK(ParseDouble(FormatDouble(v), "t") == v);
  }
  CHECK(FormatDouble(2.5) == "2.5");
  CHECK(CodeOf([] { ParseDouble("1.5x", "t"); }) == ErrorCode::kParse);
  CHECK(SplitString("a\t\tb", '\t') == std::vector<std::string>{"a", "", "b"});
  CHECK(Trim("  x y \t") == "x y");
}
