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

#include "asr/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include "json.hpp"
#include <set>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"

namespace asr {

namespace {

namespace fs = std::filesystem;

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t Le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}
std::uint16_t Le16(const unsigned char* p) {
  return std::uint16_t(p[0] | (p[1] << 8));
}

struct WavLayout {
  WavInfo info;
  int bits = 0;
  std::uint64_t data_offset = 0;
  std::uint64_t data_bytes = 0;
};

WavLayout ParseLayout(std::ifstream& in, const std::string& path) {
  unsigned char riff[12];
  if (!in.read(reinterpret_cast<char*>(riff), 12) ||
      std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(riff + 8, "WAVE", 4) != 0) {
    Fail(ErrorCode::kUnsupported, path + ": not a RIFF/WAVE file");
  }
  in.seekg(0, std::ios::end);
  const std::uint64_t file_size = static_cast<std::uint64_t>(in.tellg());
  std::uint64_t pos = 12;
  WavLayout layout;
  bool have_fmt = false;
  std::uint16_t format = 0;
  while (pos + 8 <= file_size) {
    in.seekg(static_cast<std::streamoff>(pos));
    unsigned char hdr[8];
    in.read(reinterpret_cast<char*>(hdr), 8);
    const std::uint32_t size = Le32(hdr + 4);
    const std::uint64_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size < 16 || body + size > file_size) {
        Fail(ErrorCode::kTruncated, path + ": truncated fmt chunk");
      }
      std::vector<unsigned char> fmt(size);
      in.read(reinterpret_cast<char*>(fmt.data()), size);
      format = Le16(&fmt[0]);
      layout.info.channels = Le16(&fmt[2]);
      layout.info.sample_rate_hz = Le32(&fmt[4]);
      layout.bits = Le16(&fmt[14]);
      if (format == kFormatExtensible && size >= 26) format = Le16(&fmt[24]);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (!have_fmt) Fail(ErrorCode::kUnsupported, path + ": data before fmt");
      layout.data_offset = body;
      layout.data_bytes = size;
      if (body + size > file_size) {
        Fail(ErrorCode::kTruncated,
             path + ": data chunk declares " + std::to_string(size) +
                 " bytes but only " + std::to_string(file_size - body) +
                 " are present");
      }
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) Fail(ErrorCode::kUnsupported, path + ": missing fmt chunk");
  if (layout.data_offset == 0) {
    Fail(ErrorCode::kTruncated, path + ": missing data chunk");
  }
  if (format == kFormatPcm && layout.bits == 16) {
    layout.info.is_float = false;
  } else if (format == kFormatFloat && layout.bits == 32) {
    layout.info.is_float = true;
  } else {
    Fail(ErrorCode::kUnsupported,
         path + ": unsupported encoding (format " + std::to_string(format) +
             ", " + std::to_string(layout.bits) +
             " bits); only PCM-16 and float-32 are read");
  }
  if (layout.info.channels < 1 || layout.info.sample_rate_hz <= 0) {
    Fail(ErrorCode::kUnsupported, path + ": invalid channel count or rate");
  }
  const std::uint64_t block = std::uint64_t(layout.info.channels) * (layout.bits / 8);
  if (layout.data_bytes % block != 0) {
    Fail(ErrorCode::kTruncated, path + ": data chunk ends mid-frame");
  }
  layout.info.frames = layout.data_bytes / block;
  return layout;
}

std::ifstream OpenWav(const std::string& path) {
  if (!fs::exists(path)) Fail(ErrorCode::kNotFound, "no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  return in;
}

// Decodes frames [f0, f1) of every channel.
std::vector<std::vector<double>> ReadFrames(std::ifstream& in,
                                            const WavLayout& layout,
                                            std::size_t f0, std::size_t f1) {
  const int ch = layout.info.channels;
  const std::size_t bytes_per = layout.bits / 8;
  const std::size_t n = f1 - f0;
  std::vector<unsigned char> raw(n * ch * bytes_per);
  in.seekg(static_cast<std::streamoff>(layout.data_offset + f0 * ch * bytes_per));
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    Fail(ErrorCode::kTruncated, "short read in data chunk");
  }
  std::vector<std::vector<double>> out(ch, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < ch; ++c) {
      const unsigned char* p = &raw[(i * ch + c) * bytes_per];
      if (layout.info.is_float) {
        std::uint32_t u = Le32(p);
        float f;
        std::memcpy(&f, &u, 4);
        out[c][i] = f;
      } else {
        out[c][i] = static_cast<std::int16_t>(Le16(p)) / 32768.0;
      }
    }
  }
  return out;
}

}  // namespace

void ValidateClip(const AudioClip& clip) {
  Require(!clip.samples.empty(), "audio clip has no samples");
  Require(clip.sample_rate_hz > 0, "sample rate must be positive");
  for (double s : clip.samples) {
    Require(std::isfinite(s), "audio clip contains non-finite samples");
  }
}

WavInfo ProbeWav(const std::string& path) {
  auto in = OpenWav(path);
  return ParseLayout(in, path).info;
}

std::vector<AudioClip> ReadWav(const std::string& path) {
  auto in = OpenWav(path);
  const WavLayout layout = ParseLayout(in, path);
  auto channels = ReadFrames(in, layout, 0, layout.info.frames);
  const std::string name = fs::path(path).filename().string();
  std::vector<AudioClip> clips;
  for (int c = 0; c < layout.info.channels; ++c) {
    AudioClip clip;
    clip.samples = std::move(channels[c]);
    clip.sample_rate_hz = layout.info.sample_rate_hz;
    clip.channel_id = name + ":" + std::to_string(c);
    clip.source_path = path;
    clips.push_back(std::move(clip));
  }
  return clips;
}

AudioClip ReadWavSegment(const std::string& path, int channel_index,
                         double t0_s, double t1_s) {
  auto in = OpenWav(path);
  const WavLayout layout = ParseLayout(in, path);
  Require(channel_index >= 0 && channel_index < layout.info.channels,
          path + ": channel " + std::to_string(channel_index) + " not present");
  const double sr = layout.info.sample_rate_hz;
  const long long i0 = TimeToSampleIndex(t0_s, sr);
  const long long i1 = std::min<long long>(TimeToSampleIndex(t1_s, sr),
                                           static_cast<long long>(layout.info.frames));
  Require(i0 >= 0 && i0 < i1, path + ": segment [" + FormatDouble(t0_s) + ", " +
                                  FormatDouble(t1_s) + ") outside the file");
  auto channels = ReadFrames(in, layout, static_cast<std::size_t>(i0),
                             static_cast<std::size_t>(i1));
  AudioClip clip;
  clip.samples = std::move(channels[channel_index]);
  clip.sample_rate_hz = sr;
  clip.channel_id =
      fs::path(path).filename().string() + ":" + std::to_string(channel_index);
  clip.start_time_s = static_cast<double>(i0) / sr;
  clip.source_path = path;
  return clip;
}

void WriteWav(const std::string& path, const std::vector<AudioClip>& channels,
              WavEncoding encoding) {
  Require(!channels.empty(), "WriteWav: no channels");
  const std::size_t n = channels[0].samples.size();
  const double sr = channels[0].sample_rate_hz;
  for (const auto& c : channels) {
    Require(c.samples.size() == n && c.sample_rate_hz == sr,
            "WriteWav: channels differ in length or rate");
  }
  Require(sr > 0 && std::floor(sr) == sr, "WriteWav: integer sample rate required");
  const int bytes_per = encoding == WavEncoding::kPcm16 ? 2 : 4;
  const std::uint32_t ch = static_cast<std::uint32_t>(channels.size());
  const std::uint64_t data_bytes = std::uint64_t(n) * ch * bytes_per;
  Require(data_bytes < 0xFFFFFFF0ull, "WriteWav: file too large for RIFF");

  std::string out;
  out.reserve(44 + data_bytes);
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  auto put16 = [&](std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>(v >> 8));
  };
  out += "RIFF";
  put32(static_cast<std::uint32_t>(36 + data_bytes));
  out += "WAVEfmt ";
  put32(16);
  put16(encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  put16(static_cast<std::uint16_t>(ch));
  put32(static_cast<std::uint32_t>(sr));
  put32(static_cast<std::uint32_t>(sr) * ch * bytes_per);
  put16(static_cast<std::uint16_t>(ch * bytes_per));
  put16(static_cast<std::uint16_t>(bytes_per * 8));
  out += "data";
  put32(static_cast<std::uint32_t>(data_bytes));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& c : channels) {
      const double x = c.samples[i];
      if (encoding == WavEncoding::kPcm16) {
        const double q = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
        put16(static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
      } else {
        const float f = static_cast<float>(x);
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        put32(u);
      }
    }
  }
  AtomicWriteFile(path, out);
}

void WriteWav(const std::string& path, const AudioClip& clip,
              WavEncoding encoding) {
  WriteWav(path, std::vector<AudioClip>{clip}, encoding);
}

long long TimeToSampleIndex(double t_s, double sample_rate_hz) {
  // Half-up rounding; the small bias absorbs representation error in t*sr.
  return static_cast<long long>(std::floor(t_s * sample_rate_hz + 0.5 + 1e-9));
}

AudioClip Slice(const AudioClip& clip, double t0_s, double t1_s) {
  const double dur = clip.duration_s();
  if (!(t0_s >= 0.0 && t0_s < t1_s && t1_s <= dur + 1e-9)) {
    Fail(ErrorCode::kInvalidArgument,
         "slice [" + FormatDouble(t0_s) + ", " + FormatDouble(t1_s) +
             ") outside clip of " + FormatDouble(dur) + " s");
  }
  const long long n = static_cast<long long>(clip.samples.size());
  const long long i0 = std::min(TimeToSampleIndex(t0_s, clip.sample_rate_hz), n);
  const long long i1 = std::min(TimeToSampleIndex(t1_s, clip.sample_rate_hz), n);
  Require(i1 > i0, "slice selects no samples");
  AudioClip out;
  out.samples.assign(clip.samples.begin() + i0, clip.samples.begin() + i1);
  out.sample_rate_hz = clip.sample_rate_hz;
  out.channel_id = clip.channel_id;
  out.start_time_s = clip.start_time_s + t0_s;
  out.source_path = clip.source_path;
  return out;
}

double ArchiveManifest::channel_hours() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.duration_s;
  return total / 3600.0;
}

ArchiveManifest ParseManifest(const std::string& json_text,
                              const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }
  ArchiveManifest m;
  try {
    const auto& header = j.contains("header") ? j.at("header") : j;
    m.epoch = header.value("epoch", std::string("1970-01-01T00:00:00Z"));
    m.description = header.value("description", std::string());
    const auto entries = j.value("entries", nlohmann::json::array());
    for (const auto& e : entries) {
      ManifestEntry entry;
      entry.path = e.at("path").get<std::string>();
      entry.channel_id = e.at("channel_id").get<std::string>();
      entry.start_time_s = e.at("start_time_s").get<double>();
      entry.duration_s = e.at("duration_s").get<double>();
      entry.sample_rate_hz = e.at("sample_rate_hz").get<double>();
      entry.channel_index = e.value("channel_index", 0);
      if (!base_dir.empty() && fs::path(entry.path).is_relative()) {
        entry.path = (fs::path(base_dir) / entry.path).lexically_normal().string();
      }
      m.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("manifest: ") + e.what());
  }

  std::set<std::pair<std::string, int>> seen;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    if (!(e.duration_s > 0.0)) {
      Fail(ErrorCode::kValidation, "manifest row " + std::to_string(i) + " (" +
                                       e.path + "): nonpositive duration");
    }
    if (!(e.sample_rate_hz > 0.0)) {
      Fail(ErrorCode::kValidation, "manifest row " + std::to_string(i) + " (" +
                                       e.path + "): nonpositive sample rate");
    }
    if (!seen.emplace(e.path, e.channel_index).second) {
      Fail(ErrorCode::kValidation,
           "manifest row " + std::to_string(i) + ": duplicate path " + e.path);
    }
  }

  std::vector<std::size_t> order(m.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = m.entries[a];
    const auto& y = m.entries[b];
    if (x.channel_id != y.channel_id) return x.channel_id < y.channel_id;
    return x.start_time_s < y.start_time_s;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = m.entries[order[k - 1]];
    const auto& cur = m.entries[order[k]];
    if (prev.channel_id == cur.channel_id &&
        prev.start_time_s + prev.duration_s > cur.start_time_s + 1e-9) {
      Fail(ErrorCode::kValidation,
           "manifest rows " + std::to_string(order[k - 1]) + " (" + prev.path +
               ") and " + std::to_string(order[k]) + " (" + cur.path +
               ") overlap on channel " + cur.channel_id);
    }
  }
  std::vector<ManifestEntry> sorted;
  sorted.reserve(order.size());
  for (std::size_t i : order) sorted.push_back(m.entries[i]);
  m.entries = std::move(sorted);
  return m;
}

ArchiveManifest LoadManifest(const std::string& path) {
  const std::string text = ReadTextFile(path);
  return ParseManifest(text, fs::path(path).parent_path().string());
}

std::string ManifestToJson(const ArchiveManifest& manifest) {
  nlohmann::json j;
  j["header"] = {{"epoch", manifest.epoch}, {"description", manifest.description}};
  j["entries"] = nlohmann::json::array();
  for (const auto& e : manifest.entries) {
    j["entries"].push_back({{"path", e.path},
                            {"channel_id", e.channel_id},
                            {"start_time_s", e.start_time_s},
                            {"duration_s", e.duration_s},
                            {"sample_rate_hz", e.sample_rate_hz},
                            {"channel_index", e.channel_index}});
  }
  return j.dump(2) + "\n";
}

}  // namespace asr
