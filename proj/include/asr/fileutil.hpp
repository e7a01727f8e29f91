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

#ifndef ASR_FILEUTIL_HPP_
#define ASR_FILEUTIL_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace asr {

std::string ReadTextFile(const std::string& path);

// Writes to "<path>.tmp.<pid>" and renames over the destination, so a failed
// write never leaves a partial file behind.
void AtomicWriteFile(const std::string& path, std::string_view content);

std::vector<std::string> SplitString(std::string_view s, char sep);
std::string Trim(std::string_view s);

// Shortest round-trippable decimal representation.
std::string FormatDouble(double v);
std::string FormatFixed(double v, int decimals);

double ParseDouble(std::string_view s, const std::string& context);
long long ParseInt(std::string_view s, const std::string& context);

// 64-bit FNV-1a, used for configuration fingerprints.
std::string Fnv1aHex(std::string_view s);

}  // namespace asr

#endif  // ASR_FILEUTIL_HPP_
