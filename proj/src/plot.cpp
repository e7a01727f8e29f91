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

#include "asr/plot.hpp"

#include <algorithm>
#include <cstdio>

#include "asr/fileutil.hpp"

namespace asr {

namespace {

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Num(double v) { return FormatFixed(v, 2); }

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string PrCurveSvg(const std::vector<NamedCurve>& curves, const std::string& title) {
  const double w = 480, h = 400, left = 60, top = 40, pw = 380, ph = 300;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(w) +
                  "\" height=\"" + Num(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + Num(w / 2) + "\" y=\"20\" text-anchor=\"middle\">" + Escape(title) +
       "</text>\n";
  s += "<rect x=\"" + Num(left) + "\" y=\"" + Num(top) + "\" width=\"" + Num(pw) +
       "\" height=\"" + Num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double f = i / 5.0;
    const double x = left + f * pw;
    const double y = top + ph - f * ph;
    s += "<text x=\"" + Num(x) + "\" y=\"" + Num(top + ph + 16) + "\" text-anchor=\"middle\">" +
         FormatFixed(f, 1) + "</text>\n";
    s += "<text x=\"" + Num(left - 6) + "\" y=\"" + Num(y + 4) + "\" text-anchor=\"end\">" +
         FormatFixed(f, 1) + "</text>\n";
  }
  s += "<text x=\"" + Num(left + pw / 2) + "\" y=\"" + Num(top + ph + 34) +
       "\" text-anchor=\"middle\">Recall</text>\n";
  s += "<text x=\"16\" y=\"" + Num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       Num(top + ph / 2) + ")\">Precision</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* colour = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string pts;
    for (const PrPoint& p : curves[c].points) {
      pts += Num(left + p.recall * pw) + "," + Num(top + ph - p.precision * ph) + " ";
    }
    if (!pts.empty()) pts.pop_back();
    s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
         "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(c);
    s += "<line x1=\"" + Num(left + pw - 120) + "\" y1=\"" + Num(ly) + "\" x2=\"" +
         Num(left + pw - 100) + "\" y2=\"" + Num(ly) + "\" stroke=\"" + colour + "\"/>\n";
    s += "<text x=\"" + Num(left + pw - 95) + "\" y=\"" + Num(ly + 4) + "\">" +
         Escape(curves[c].name) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string DielSvg(const DielMatrix& diel, const std::string& title) {
  const std::size_t days = diel.counts.rows();
  const std::size_t bins = diel.counts.cols();
  const double left = 90, top = 40, cell_w = std::max(2.0, 480.0 / std::max<std::size_t>(bins, 1));
  const double cell_h = 14;
  const double w = left + cell_w * static_cast<double>(bins) + 20;
  const double h = top + cell_h * static_cast<double>(days) + 40;
  long long peak = 0;
  for (long long v : diel.counts.data()) peak = std::max(peak, v);
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(w) +
                  "\" height=\"" + Num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + Num(w / 2) + "\" y=\"20\" text-anchor=\"middle\">" + Escape(title) +
       "</text>\n";
  for (std::size_t d = 0; d < days; ++d) {
    const double y = top + cell_h * static_cast<double>(d);
    s += "<text x=\"" + Num(left - 6) + "\" y=\"" + Num(y + cell_h - 3) +
         "\" text-anchor=\"end\">" + Escape(diel.day_labels[d]) + "</text>\n";
    for (std::size_t b = 0; b < bins; ++b) {
      const long long v = diel.counts(d, b);
      if (v == 0) continue;
      const int shade = 235 - static_cast<int>(205.0 * static_cast<double>(v) / static_cast<double>(peak));
      char fill[16];
      std::snprintf(fill, sizeof(fill), "#%02x%02xff", shade, shade);
      s += "<rect x=\"" + Num(left + cell_w * static_cast<double>(b)) + "\" y=\"" + Num(y) +
           "\" width=\"" + Num(cell_w) + "\" height=\"" + Num(cell_h) + "\" fill=\"" + fill +
           "\"><title>" + std::to_string(v) + "</title></rect>\n";
    }
  }
  const double gy = top + cell_h * static_cast<double>(days);
  for (int hour = 0; hour <= 24; hour += 6) {
    const double x = left + cell_w * static_cast<double>(bins) * hour / 24.0;
    s += "<text x=\"" + Num(x) + "\" y=\"" + Num(gy + 14) + "\" text-anchor=\"middle\">" +
         std::to_string(hour) + ":00</text>\n";
  }
  s += "<rect x=\"" + Num(left) + "\" y=\"" + Num(top) + "\" width=\"" +
       Num(cell_w * static_cast<double>(bins)) + "\" height=\"" +
       Num(cell_h * static_cast<double>(days)) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace asr
