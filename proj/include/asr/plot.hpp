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

#ifndef ASR_PLOT_HPP_
#define ASR_PLOT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "asr/eval.hpp"

namespace asr {

struct NamedCurve {
  std::string name;
  std::vector<PrPoint> points;
};

// Precision (y) against recall (x), one polyline per curve, with a legend.
std::string PrCurveSvg(const std::vector<NamedCurve>& curves,
                       const std::string& title);

// Day x time-of-day raster; cell shade scales with the count.
std::string DielSvg(const DielMatrix& diel, const std::string& title);

}  // namespace asr

#endif  // ASR_PLOT_HPP_
