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

#ifndef ASR_AUDIO_IO_HPP_
#define ASR_AUDIO_IO_HPP_

#include <string>
#include <vector>

namespace asr {

inline constexpr double kDefaultSampleRateHz = 2000.0;

// A single-channel waveform segment. Samples are normalized to [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  double sample_rate_hz = kDefaultSampleRateHz;
  std::string channel_id;
  // Seconds since the deployment epoch of sample 0.
  double start_time_s = 0.0;
  std::string source_path;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
  double end_time_s() const { return start_time_s + duration_s(); }
};

// Throws unless the clip satisfies the type invariants (nonempty, positive
// rate, finite samples).
void ValidateClip(const AudioClip& clip);

enum class WavEncoding { kPcm16, kFloat32 };

// One clip per channel; channel_id is "<filename>:<index>".
std::vector<AudioClip> ReadWav(const std::string& path);

// Reads samples [t0_s, t1_s) (seconds from the file start) of one channel
// without loading the rest of the file.
AudioClip ReadWavSegment(const std::string& path, int channel_index,
                         double t0_s, double t1_s);

struct WavInfo {
  int channels = 0;
  double sample_rate_hz = 0.0;
  std::size_t frames = 0;
  bool is_float = false;
};
WavInfo ProbeWav(const std::string& path);

// All clips must share sample rate and length; they are interleaved as
// channels in order.
void WriteWav(const std::string& path, const std::vector<AudioClip>& channels,
              WavEncoding encoding = WavEncoding::kPcm16);
void WriteWav(const std::string& path, const AudioClip& clip,
              WavEncoding encoding = WavEncoding::kPcm16);

// Sample index for a time offset, rounding half up.
long long TimeToSampleIndex(double t_s, double sample_rate_hz);

// Samples [round(t0*sr), round(t1*sr)) of the clip; times are relative to the
// clip start.
AudioClip Slice(const AudioClip& clip, double t0_s, double t1_s);

struct ManifestEntry {
  std::string path;
  std::string channel_id;
  double start_time_s = 0.0;
  double duration_s = 0.0;
  double sample_rate_hz = kDefaultSampleRateHz;
  // Which channel of a multi-channel file the entry refers to.
  int channel_index = 0;
};

struct ArchiveManifest {
  // ISO-8601 deployment epoch; all event times are seconds from it.
  std::string epoch;
  std::string description;
  std::vector<ManifestEntry> entries;

  double channel_hours() const;
};

// Parses and validates manifest JSON. Relative entry paths are resolved
// against base_dir when it is nonempty. Entries come back sorted by
// (channel_id, start_time_s).
ArchiveManifest ParseManifest(const std::string& json_text,
                              const std::string& base_dir = "");
ArchiveManifest LoadManifest(const std::string& path);
std::string ManifestToJson(const ArchiveManifest& manifest);

}  // namespace asr

#endif  // ASR_AUDIO_IO_HPP_
