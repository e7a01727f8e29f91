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

#include "asr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"
#include "json.hpp"

namespace asr {

double TimeOverlapFraction(const DetectionEvent& det, const DetectionEvent& truth) {
  const double d = truth.t1_s - truth.t0_s;
  if (d <= 0) return 0.0;
  const double inter = std::min(det.t1_s, truth.t1_s) - std::max(det.t0_s, truth.t0_s);
  return inter > 0 ? inter / d : 0.0;
}

namespace {

bool FreqOverlap(const DetectionEvent& a, const DetectionEvent& b) {
  return std::min(a.f_hi_hz, b.f_hi_hz) > std::max(a.f_lo_hz, b.f_lo_hz);
}

}  // namespace

MatchResult MatchEvents(const std::vector<DetectionEvent>& dets,
                        const std::vector<DetectionEvent>& truths, const MatchOptions& options) {
  Require(options.min_time_overlap_frac >= 0 && options.min_time_overlap_frac <= 1,
          "overlap fraction must lie in [0, 1]");
  struct ChannelIndex {
    std::vector<std::size_t> by_t0;
    double max_duration = 0.0;
  };
  std::map<std::string, ChannelIndex> index;
  for (std::size_t j = 0; j < truths.size(); ++j) {
    auto& ci = index[truths[j].channel_id];
    ci.by_t0.push_back(j);
    ci.max_duration = std::max(ci.max_duration, truths[j].duration_s());
  }
  for (auto& [ch, ci] : index) {
    std::stable_sort(ci.by_t0.begin(), ci.by_t0.end(), [&](std::size_t a, std::size_t b) {
      return truths[a].t0_s < truths[b].t0_s;
    });
  }

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });

  MatchResult r;
  r.det_to_truth.assign(dets.size(), -1);
  std::vector<char> taken(truths.size(), 0);
  for (std::size_t i : order) {
    const DetectionEvent& d = dets[i];
    const auto it = index.find(d.channel_id);
    if (it == index.end()) continue;
    const auto& ci = it->second;
    const double lo = d.t0_s - ci.max_duration;
    auto first = std::lower_bound(ci.by_t0.begin(), ci.by_t0.end(), lo,
                                  [&](std::size_t j, double t) { return truths[j].t0_s < t; });
    long long best = -1;
    double best_frac = 0.0;
    for (auto jt = first; jt != ci.by_t0.end() && truths[*jt].t0_s < d.t1_s; ++jt) {
      const std::size_t j = *jt;
      if (taken[j]) continue;
      const double frac = TimeOverlapFraction(d, truths[j]);
      if (frac <= 0 || frac < options.min_time_overlap_frac) continue;
      if (options.require_freq_overlap && !FreqOverlap(d, truths[j])) continue;
      if (best < 0 || frac > best_frac ||
          (frac == best_frac && j < static_cast<std::size_t>(best))) {
        best = static_cast<long long>(j);
        best_frac = frac;
      }
    }
    if (best >= 0) {
      taken[best] = 1;
      r.det_to_truth[i] = best;
      r.pairs.emplace_back(i, static_cast<std::size_t>(best));
    }
  }
  r.tp = r.pairs.size();
  r.fp = dets.size() - r.tp;
  r.fn = truths.size() - r.tp;
  return r;
}

double F1Score(double precision, double recall) {
  if (precision + recall <= 0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

MetricsReport ComputeMetrics(std::size_t tp, std::size_t fp, std::size_t fn, double hours,
                             std::optional<long long> negative_windows) {
  Require(hours > 0 && std::isfinite(hours), "hours must be positive");
  MetricsReport m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.hours = hours;
  if (tp + fn > 0) {
    m.tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    m.recall_undefined = true;
  }
  if (tp + fp > 0) {
    m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    m.precision_undefined = true;
  }
  if (m.precision + m.tpr > 0) {
    m.f1 = F1Score(m.precision, m.tpr);
  } else {
    m.f1_undefined = true;
  }
  m.fp_per_hour = static_cast<double>(fp) / hours;
  if (negative_windows) {
    Require(*negative_windows > 0, "negative window count must be positive");
    m.negative_windows = negative_windows;
    m.fpr = static_cast<double>(fp) / static_cast<double>(*negative_windows);
  }
  return m;
}

std::string MetricsToJson(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  j["tpr"] = r.tpr;
  j["precision"] = r.precision;
  j["f1"] = r.f1;
  j["fp_per_hour"] = r.fp_per_hour;
  j["hours"] = r.hours;
  if (r.fpr) {
    j["fpr"] = *r.fpr;
    j["negative_windows"] = *r.negative_windows;
  }
  j["recall_undefined"] = r.recall_undefined;
  j["precision_undefined"] = r.precision_undefined;
  j["f1_undefined"] = r.f1_undefined;
  return j.dump(2) + "\n";
}

std::vector<PrPoint> PrCurve(const std::vector<DetectionEvent>& dets,
                             const std::vector<DetectionEvent>& truths,
                             const MatchOptions& options) {
  Require(!truths.empty(), "a PR curve needs at least one truth event");
  const MatchResult m = MatchEvents(dets, truths, options);
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  std::vector<PrPoint> curve;
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    (m.det_to_truth[i] >= 0 ? tp : fp) += 1;
    const bool last_of_score =
        k + 1 == order.size() || dets[order[k + 1]].score != dets[i].score;
    if (!last_of_score) continue;
    PrPoint p;
    p.threshold = dets[i].score;
    p.tp = tp;
    p.fp = fp;
    p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    p.recall = static_cast<double>(tp) / static_cast<double>(truths.size());
    curve.push_back(p);
  }
  return curve;
}

double AveragePrecision(const std::vector<PrPoint>& curve) {
  double ap = 0.0;
  double prev_recall = 0.0;
  for (const PrPoint& p : curve) {
    ap += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
  }
  return ap;
}

std::string PrCurveToCsv(const std::vector<PrPoint>& curve) {
  std::string out = "threshold,precision,recall,tp,fp\n";
  for (const PrPoint& p : curve) {
    out += FormatDouble(p.threshold) + "," + FormatDouble(p.precision) + "," +
           FormatDouble(p.recall) + "," + std::to_string(p.tp) + "," + std::to_string(p.fp) + "\n";
  }
  return out;
}

double PercentDifference(long long a, long long b) {
  Require(a >= 0 && b >= 0, "counts must be nonnegative");
  Require(a + b > 0, "percent difference is undefined when both counts are zero",
          ErrorCode::kDegenerate);
  const double v = 100.0 * std::abs(static_cast<double>(a - b)) / ((a + b) / 2.0);
  return std::round(v * 10.0) / 10.0;
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
long long DaysFromCivil(long long y, unsigned m, unsigned d) {
  y -= m <= 2 ? 1 : 0;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

void CivilFromDays(long long z, long long& y, unsigned& m, unsigned& d) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2 ? 1 : 0;
}

unsigned DaysInMonth(long long y, unsigned m) {
  static const unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : kDays[m - 1];
}

int Digits(const std::string& s, std::size_t pos, std::size_t n, const std::string& text) {
  Require(pos + n <= s.size(), "malformed timestamp '" + text + "'", ErrorCode::kParse);
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    Require(s[i] >= '0' && s[i] <= '9', "malformed timestamp '" + text + "'", ErrorCode::kParse);
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

double ParseIsoTimestamp(const std::string& text) {
  const std::string s = Trim(text);
  const auto bad = [&]() { Fail(ErrorCode::kParse, "malformed timestamp '" + text + "'"); };
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') bad();
  const int y = Digits(s, 0, 4, text);
  const int mo = Digits(s, 5, 2, text);
  const int d = Digits(s, 8, 2, text);
  if (mo < 1 || mo > 12 || d < 1 || d > static_cast<int>(DaysInMonth(y, mo))) bad();
  double secs = 0.0;
  std::size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
    const int hh = Digits(s, pos + 1, 2, text);
    if (pos + 3 >= s.size() || s[pos + 3] != ':') bad();
    const int mm = Digits(s, pos + 4, 2, text);
    if (hh > 23 || mm > 59) bad();
    secs = hh * 3600.0 + mm * 60.0;
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
      const int ss = Digits(s, pos + 1, 2, text);
      if (ss > 60) bad();
      secs += ss;
      pos += 3;
      if (pos < s.size() && s[pos] == '.') {
        std::size_t end = pos + 1;
        while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
        if (end == pos + 1) bad();
        secs += ParseDouble("0" + s.substr(pos, end - pos), "timestamp fraction");
        pos = end;
      }
    }
    if (pos < s.size() && s[pos] == 'Z') {
      ++pos;
    } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      const int sign = s[pos] == '+' ? 1 : -1;
      const int oh = Digits(s, pos + 1, 2, text);
      std::size_t next = pos + 3;
      int om = 0;
      if (next < s.size() && s[next] == ':') ++next;
      if (next < s.size()) {
        om = Digits(s, next, 2, text);
        next += 2;
      }
      secs -= sign * (oh * 3600.0 + om * 60.0);
      pos = next;
    }
  }
  if (pos != s.size()) bad();
  return static_cast<double>(DaysFromCivil(y, mo, d)) * 86400.0 + secs;
}

std::string FormatDate(long long unix_day) {
  long long y;
  unsigned m, d;
  CivilFromDays(unix_day, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u", y, m, d);
  return buf;
}

DielMatrix DielAggregate(const std::vector<DetectionEvent>& events, const std::string& epoch,
                         const std::string& first_day, const std::string& last_day,
                         int bin_minutes) {
  Require(bin_minutes >= 1 && 1440 % bin_minutes == 0,
          "bin_minutes must divide 1440 (got " + std::to_string(bin_minutes) + ")");
  const double epoch_s = ParseIsoTimestamp(epoch);
  const auto first = static_cast<long long>(std::floor(ParseIsoTimestamp(first_day) / 86400.0));
  const auto last = static_cast<long long>(std::floor(ParseIsoTimestamp(last_day) / 86400.0));
  Require(first <= last, "date range is empty");
  DielMatrix m;
  m.bin_minutes = bin_minutes;
  const std::size_t n_days = static_cast<std::size_t>(last - first + 1);
  const std::size_t n_bins = static_cast<std::size_t>(1440 / bin_minutes);
  m.counts = Matrix<long long>(n_days, n_bins, 0);
  for (long long day = first; day <= last; ++day) m.day_labels.push_back(FormatDate(day));
  for (const auto& ev : events) {
    const double t = epoch_s + ev.t0_s;
    const auto day = static_cast<long long>(std::floor(t / 86400.0));
    if (day < first || day > last) {
      ++m.dropped;
      continue;
    }
    const double minute = (t - static_cast<double>(day) * 86400.0) / 60.0;
    const auto bin = std::min(static_cast<std::size_t>(minute / bin_minutes), n_bins - 1);
    ++m.counts(static_cast<std::size_t>(day - first), bin);
  }
  return m;
}

std::string DielToCsv(const DielMatrix& diel) {
  std::string out = "day";
  const std::size_t n_bins = diel.counts.cols();
  for (std::size_t b = 0; b < n_bins; ++b) {
    const int minute = static_cast<int>(b) * diel.bin_minutes;
    char buf[16];
    std::snprintf(buf, sizeof(buf), ",%02d:%02d", minute / 60, minute % 60);
    out += buf;
  }
  out += "\n";
  for (std::size_t d = 0; d < diel.counts.rows(); ++d) {
    out += diel.day_labels[d];
    for (std::size_t b = 0; b < n_bins; ++b) out += "," + std::to_string(diel.counts(d, b));
    out += "\n";
  }
  return out;
}

}  // namespace asr
