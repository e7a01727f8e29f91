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
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "asr/error.hpp"
#include "asr/eval.hpp"
#include "doctest.h"

using namespace asr;

namespace {

DetectionEvent Ev(double t0, double t1, double score = 0.5, std::string ch = "c") {
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

struct Scored {
  std::vector<DetectionEvent> dets;
  std::vector<DetectionEvent> truths;
};

// Slots of 10 s; each slot holds a truth with probability prevalence and
// always holds a detection with an independent random score.
Scored RandomScored(std::uint64_t seed, int slots, double prevalence, double t_base = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scored s;
  for (int i = 0; i < slots; ++i) {
    const double t = t_base + 10.0 * i;
    if (u(rng) < prevalence) s.truths.push_back(Ev(t + 1, t + 3));
    s.dets.push_back(Ev(t + 1, t + 3, u(rng)));
  }
  return s;
}

}  // namespace

TEST_CASE("percent difference of paired analyst counts") {
  CHECK(PercentDifference(767, 656) == doctest::Approx(15.6));
  CHECK(PercentDifference(2280, 1611) == doctest::Approx(34.4));
  CHECK(PercentDifference(1663, 1265) == doctest::Approx(27.2));
  CHECK(PercentDifference(2206, 1745) == doctest::Approx(23.3));
  CHECK(PercentDifference(42, 42) == 0.0);
  CHECK(PercentDifference(656, 767) == PercentDifference(767, 656));
  CHECK_THROWS_AS(PercentDifference(0, 0), Error);
  CHECK_THROWS_AS(PercentDifference(-1, 3), Error);
}

TEST_CASE("metrics arithmetic") {
  CHECK(F1Score(0.84, 0.63) == doctest::Approx(0.7199).epsilon(0.0001 / 0.7199));
  const auto m = ComputeMetrics(63, 12, 37, 120.0, 2000);
  CHECK(m.tpr == doctest::Approx(0.63));
  CHECK(m.precision == doctest::Approx(63.0 / 75.0));
  REQUIRE(m.fpr.has_value());
  CHECK(*m.fpr == doctest::Approx(12.0 / 2000.0));
  CHECK(ComputeMetrics(0, 104, 0, 120.0).fp_per_hour == doctest::Approx(0.8667).epsilon(0.0001 / 0.8667));
  CHECK(!ComputeMetrics(1, 1, 1, 1.0).fpr.has_value());
}

TEST_CASE("degenerate metrics are flagged, not failed") {
  const auto m = ComputeMetrics(0, 0, 0, 1.0);
  CHECK(m.recall_undefined);
  CHECK(m.precision_undefined);
  CHECK(m.f1_undefined);
  CHECK(m.tpr == 0.0);
  CHECK(m.precision == 0.0);
  CHECK(m.f1 == 0.0);
  CHECK_THROWS_AS(ComputeMetrics(1, 0, 0, 0.0), Error);
}

TEST_CASE("f1 lies between precision and recall") {
  std::mt19937_64 rng(81);
  for (int i = 0; i < 200; ++i) {
    const std::size_t tp = 1 + rng() % 50, fp = rng() % 50, fn = rng() % 50;
    const auto m = ComputeMetrics(tp, fp, fn, 1.0);
    CHECK(m.f1 >= std::min(m.precision, m.tpr) - 1e-12);
    CHECK(m.f1 <= std::max(m.precision, m.tpr) + 1e-12);
  }
}

TEST_CASE("matching examples") {
  auto r = MatchEvents({Ev(1, 2)}, {Ev(1, 2)});
  CHECK(r.tp == 1);
  CHECK(r.fp == 0);
  CHECK(r.fn == 0);
  r = MatchEvents({Ev(5, 6)}, {Ev(1, 2)});
  CHECK(r.tp == 0);
  CHECK(r.fp == 1);
  CHECK(r.fn == 1);
  r = MatchEvents({Ev(2, 5)}, {Ev(1, 3)});
  CHECK(TimeOverlapFraction(Ev(2, 5), Ev(1, 3)) == 0.5);
  CHECK(r.tp == 1);
  r = MatchEvents({Ev(1, 2, 0.5, "a")}, {Ev(1, 2, 0.5, "b")});
  CHECK(r.tp == 0);
}

TEST_CASE("matching takes detections in descending score") {
  // Both detections can only take the one truth; the higher score wins.
  const auto r = MatchEvents({Ev(0, 2, 0.2), Ev(0, 2, 0.9)}, {Ev(0, 2)});
  CHECK(r.tp == 1);
  CHECK(r.det_to_truth[1] == 0);
  CHECK(r.det_to_truth[0] == -1);
}

TEST_CASE("frequency overlap is optional") {
  DetectionEvent det = Ev(0, 2);
  det.f_lo_hz = 500;
  det.f_hi_hz = 600;
  CHECK(MatchEvents({det}, {Ev(0, 2)}).tp == 1);
  CHECK(MatchEvents({det}, {Ev(0, 2)}, MatchOptions{0.5, true}).tp == 0);
}

TEST_CASE("match counts add up") {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DetectionEvent> dets, truths;
    for (int i = 0; i < 20; ++i) {
      const double a = u(rng), b = u(rng);
      dets.push_back(Ev(a, a + 1 + u(rng) / 20, u(rng)));
      truths.push_back(Ev(b, b + 1 + u(rng) / 20));
    }
    dets.resize(rng() % 21);
    const auto r = MatchEvents(dets, truths);
    CHECK(r.tp + r.fn == truths.size());
    CHECK(r.tp + r.fp == dets.size());
    CHECK(r.pairs.size() == r.tp);
  }
}

TEST_CASE("PR curve of all-correct detections is pinned at precision one") {
  std::vector<DetectionEvent> dets, truths;
  for (int i = 0; i < 10; ++i) {
    truths.push_back(Ev(10 * i, 10 * i + 2));
    dets.push_back(Ev(10 * i, 10 * i + 2, 0.1 * i));
  }
  const auto curve = PrCurve(dets, truths);
  CHECK(curve.size() == 10);
  for (const auto& p : curve) CHECK(p.precision == 1.0);
  CHECK(curve.back().recall == 1.0);
  CHECK(AveragePrecision(curve) == doctest::Approx(1.0));
}

TEST_CASE("PR curve thresholds descend and recall never drops") {
  const auto s = RandomScored(83, 300, 0.3);
  const auto curve = PrCurve(s.dets, s.truths);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].threshold < curve[i - 1].threshold);
    CHECK(curve[i].recall >= curve[i - 1].recall);
  }
}

TEST_CASE("random scores give average precision near prevalence") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = RandomScored(1000 + seed, 500, 0.3);
    const double prevalence = static_cast<double>(s.truths.size()) / 500.0;
    CHECK(AveragePrecision(PrCurve(s.dets, s.truths)) == doctest::Approx(prevalence).epsilon(0.1 / prevalence));
  }
}

TEST_CASE("PR curve of merged halves equals the whole corpus") {
  const auto first = RandomScored(84, 100, 0.4, 0.0);
  const auto second = RandomScored(85, 100, 0.4, 1000.0);
  Scored whole;
  whole.dets = first.dets;
  whole.dets.insert(whole.dets.end(), second.dets.begin(), second.dets.end());
  whole.truths = first.truths;
  whole.truths.insert(whole.truths.end(), second.truths.begin(), second.truths.end());
  Scored merged;
  merged.dets = second.dets;
  merged.dets.insert(merged.dets.end(), first.dets.begin(), first.dets.end());
  merged.truths = second.truths;
  merged.truths.insert(merged.truths.end(), first.truths.begin(), first.truths.end());
  CHECK(PrCurveToCsv(PrCurve(merged.dets, merged.truths)) == PrCurveToCsv(PrCurve(whole.dets, whole.truths)));
}

TEST_CASE("timestamps and dates") {
  CHECK(ParseIsoTimestamp("1970-01-01") == 0.0);
  CHECK(ParseIsoTimestamp("2009-03-28") == 1238198400.0);
  CHECK(ParseIsoTimestamp("2009-03-28T12:30:15Z") == 1238198400.0 + 45015.0);
  CHECK(ParseIsoTimestamp("2009-03-28T12:30+01:00") == 1238198400.0 + 41400.0);
  CHECK(ParseIsoTimestamp("2000-02-29T00:00:00.5") == 951782400.5);
  CHECK(FormatDate(0) == "1970-01-01");
  CHECK(FormatDate(14331) == "2009-03-28");
  CHECK(FormatDate(-1) == "1969-12-31");
  CHECK_THROWS_AS(ParseIsoTimestamp("2009-13-01"), Error);
  CHECK_THROWS_AS(ParseIsoTimestamp("yesterday"), Error);
}

TEST_CASE("diel aggregation") {
  const double noon_half = 12 * 3600 + 30 * 60;
  const auto d = DielAggregate({Ev(noon_half, noon_half + 2)}, "2009-03-28", "2009-03-28", "2009-03-29", 10);
  CHECK(d.counts.rows() == 2);
  CHECK(d.counts.cols() == 144);
  CHECK(d.counts(0, 75) == 1);
  CHECK(d.day_labels[1] == "2009-03-29");

  const auto empty = DielAggregate({}, "2009-03-28", "2009-03-28", "2009-03-30", 60);
  for (long long v : empty.counts.data()) CHECK(v == 0);
  CHECK_THROWS_AS(DielAggregate({}, "2009-03-28", "2009-03-28", "2009-03-30", 7), Error);
}

TEST_CASE("diel counts are conserved") {
  std::mt19937_64 rng(86);
  std::uniform_real_distribution<double> u(-86400.0, 5 * 86400.0);
  std::vector<DetectionEvent> events;
  for (int i = 0; i < 500; ++i) {
    const double t = u(rng);
    events.push_back(Ev(t, t + 1));
  }
  const auto d = DielAggregate(events, "2009-03-28T06:00:00Z", "2009-03-28", "2009-03-30", 30);
  long long total = d.dropped;
  for (long long v : d.counts.data()) total += v;
  CHECK(total == 500);
  CHECK(d.dropped > 0);
}
