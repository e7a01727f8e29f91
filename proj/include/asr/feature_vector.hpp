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

#ifndef ASR_FEATURE_VECTOR_HPP_
#define ASR_FEATURE_VECTOR_HPP_

#include <string>
#include <vector>

namespace asr {

// Fixed-length feature vector tagged with the scheme that produced it
// (e.g. "gridmask:5x8"). Models refuse vectors whose fingerprint
// differs from the one they were trained on.
struct FeatureVector {
  std::vector<double> values;
  std::string fingerprint;

  std::size_t size() const { return values.size(); }
  bool operator==(const FeatureVector&) const = default;
};

}  // namespace asr

#endif  // ASR_FEATURE_VECTOR_HPP_
