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

#ifndef ASR_EVAL_HPP_
#define ASR_EVAL_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asr/events.hpp"
#include "asr/matrix.hpp"

namespace asr {

struct MatchOptions {
  double min_time_overlap_frac = 0.5;
  bool require_freq_overlap = false;
};

struct MatchResult {
  std::size_t tp = 0, fp = 0, fn = 0;
  // (detection index, truth index)
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  // For each detection, the truth it matched or -1.
  std::vector<long long> det_to_truth;
};

// Time overlap as a fraction of the truth's duration.
double TimeOverlapFraction(const DetectionEvent& det,
                           const DetectionEvent& truth);

// Greedy one-to-one matching in descending detection score (ties by input
// order). A detection takes the eligible unmatched truth on its channel with
// the largest overlap fraction.
MatchResult MatchEvents(const std::vector<DetectionEvent>& dets,
                        const std::vector<DetectionEvent>& truths,
                        const MatchOptions& options = {});

struct MetricsReport {
  std::size_t tp = 0, fp = 0, fn = 0;
  double tpr = 0.0;  // recall
  std::optional<double> fpr;
  double precision = 0.0;
  double f1 = 0.0;
  double fp_per_hour = 0.0;
  double hours = 0.0;
  std::optional<long long> negative_windows;
  bool recall_undefined = false;
  bool precision_undefined = false;
  bool f1_undefined = false;
};

double F1Score(double precision, double recall);

MetricsReport ComputeMetrics(std::size_t tp, std::size_t fp, std::size_t fn,
                             double hours,
                             std::optional<long long> negative_windows = {});
std::string MetricsToJson(const MetricsReport& report);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t tp = 0, fp = 0;
};

// One point per distinct score, thresholds descending; a detection counts at
// threshold t when score >= t.
std::vector<PrPoint> PrCurve(const std::vector<DetectionEvent>& dets,
                             const std::vector<DetectionEvent>& truths,
                             const MatchOptions& options = {});

// Step-wise area: sum over points of (recall_i - recall_{i-1}) * precision_i.
double AveragePrecision(const std::vector<PrPoint>& curve);

std::string PrCurveToCsv(const std::vector<PrPoint>& curve);

// 100 * |a - b| / mean(a, b), rounded to one decimal.
double PercentDifference(long long a, long long b);

struct DielMatrix {
  std::vector<std::string> day_labels;  // YYYY-MM-DD
  int bin_minutes = 60;
  Matrix<long long> counts;  // [days x bins]
  long long dropped = 0;
};

// Seconds since 1970-01-01T00:00:00Z for an ISO-8601 timestamp
// ("YYYY-MM-DD", "YYYY-MM-DDThh:mm[:ss[.fff]]" with optional Z or +hh:mm).
double ParseIsoTimestamp(const std::string& text);
std::string FormatDate(long long unix_day);

// Counts event onsets per (day, time-of-day bin). Days are
// [first_day, last_day] inclusive (YYYY-MM-DD, UTC); event times are seconds
// from the epoch. Events outside the range are counted in dropped.
DielMatrix DielAggregate(const std::vector<DetectionEvent>& events,
                         const std::string& epoch, const std::string& first_day,
                         const std::string& last_day, int bin_minutes);
std::string DielToCsv(const DielMatrix& diel);

}  // namespace asr

#endif  // ASR_EVAL_HPP_
