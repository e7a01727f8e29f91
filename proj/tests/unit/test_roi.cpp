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
#include <vector>

#include "asr/error.hpp"
#include "asr/roi.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asr;
using asr::testing::FloodFill;
using asr::testing::RandomMask;

namespace {

Spectrogram Blank(std::size_t frames, std::size_t bins, double fill = 0.0) {
  Spectrogram s;
  s.power = MatrixD(frames, bins, fill);
  s.sample_rate_hz = 2000;
  s.params.fft_size = 256;
  s.params.hop = 64;
  s.time_step_s = 0.032;
  s.freq_step_hz = 7.8125;
  return s;
}

// Speckle background plus bright rectangles.
Spectrogram WithBlobs(std::uint64_t seed) {
  Spectrogram s = Blank(120, 60);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : s.power.data()) v = u(rng);
  auto blob = [&](std::size_t f0, std::size_t f1, std::size_t b0, std::size_t b1, double level) {
    for (std::size_t f = f0; f <= f1; ++f) {
      for (std::size_t b = b0; b <= b1; ++b) s.power(f, b) = level + u(rng);
    }
  };
  blob(10, 30, 10, 20, 50.0);
  blob(60, 70, 35, 50, 80.0);
  return s;
}

Region Box(const Spectrogram& s, std::uint32_t f0, std::uint32_t f1, std::uint32_t b0,
           std::uint32_t b1) {
  std::vector<Pixel> px;
  for (std::uint32_t f = f0; f <= f1; ++f) {
    for (std::uint32_t b = b0; b <= b1; ++b) px.push_back({f, b});
  }
  return MakeRegion(px, s);
}

}  // namespace

TEST_CASE("connected regions agree with flood fill") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int conn = trial % 2 ? 4 : 8;
    const auto bits = RandomMask(rng, 24, 31, 0.45);
    const Spectrogram s = Blank(24, 31, 1.0);
    const auto regions = ConnectedRegions(BinaryMask{bits, "t"}, s, conn);
    const auto ref = FloodFill(bits, conn);
    REQUIRE(regions.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(regions[i].pixels == ref[i]);
  }
}

TEST_CASE("empty and full masks") {
  const Spectrogram s = Blank(5, 6, 2.0);
  CHECK(ConnectedRegions(BinaryMask{MaskMatrix(5, 6, 0), ""}, s).empty());
  const auto full = ConnectedRegions(BinaryMask{MaskMatrix(5, 6, 1), ""}, s, 4);
  REQUIRE(full.size() == 1);
  CHECK(full[0].area_px == 30);
  CHECK(full[0].mean_intensity == 2.0);
}

TEST_CASE("diagonal neighbours join only under 8-connectivity") {
  const Spectrogram s = Blank(3, 3, 1.0);
  MaskMatrix m(3, 3, 0);
  m(0, 0) = m(1, 1) = m(2, 2) = 1;
  CHECK(ConnectedRegions(BinaryMask{m, ""}, s, 8).size() == 1);
  CHECK(ConnectedRegions(BinaryMask{m, ""}, s, 4).size() == 3);
}

TEST_CASE("region geometry") {
  const Spectrogram s = Blank(20, 20, 1.0);
  const Region r = MakeRegion({{5, 3}, {4, 2}, {5, 3}, {7, 6}}, s);
  CHECK(r.area_px == 3);
  CHECK(r.frame_min == 4);
  CHECK(r.frame_max == 7);
  CHECK(r.bin_min == 2);
  CHECK(r.bin_max == 6);
  CHECK(r.bbox.t0_s == doctest::Approx(s.FrameCenterTime(4) - 0.016));
  CHECK(r.bbox.t1_s == doctest::Approx(s.FrameCenterTime(7) + 0.016));
  CHECK(r.bbox.f_lo_hz == doctest::Approx(1.5 * 7.8125));
  CHECK(r.bbox.f_hi_hz == doctest::Approx(6.5 * 7.8125));
  const MaskMatrix local = r.LocalMask();
  CHECK(local.rows() == 5);
  CHECK(local.cols() == 4);
  CHECK(local(0, 0) == 1);
  CHECK(local(1, 1) == 1);
  CHECK(local(4, 3) == 1);
  CHECK(local(0, 1) == 0);
  CHECK(MakeRegion({{0, 0}}, s).bbox.f_lo_hz == 0.0);
  CHECK_THROWS_AS(MakeRegion({}, s), Error);
}

TEST_CASE("rank quantization is invariant to monotone remapping") {
  const auto s = WithBlobs(3);
  MatrixD mapped = s.power;
  for (double& v : mapped.data()) v = std::exp(3 * v) + 7;
  CHECK(RankQuantize(s.power) == RankQuantize(mapped));
  MatrixD ties(2, 2, 5.0);
  ties(1, 1) = 9.0;
  const auto q = RankQuantize(ties);
  CHECK(q(0, 0) == 0);
  CHECK(q(0, 1) == 0);
  CHECK(q(1, 1) == 192);
}

TEST_CASE("MSER regions are connected components of a threshold set") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = WithBlobs(seed);
    MserParams p;
    p.connectivity = seed == 2 ? 4 : 8;
    const auto grey = RankQuantize(s.power);
    const auto regions = MserDetect(s, p);
    REQUIRE(!regions.empty());
    for (const Region& r : regions) {
      CHECK(r.area_px >= p.min_area_px);
      CHECK(r.area_px <= s.power.size() / 5);
      std::uint8_t level = 255;
      for (const Pixel& px : r.pixels) level = std::min(level, grey(px.frame, px.bin));
      MaskMatrix above(grey.rows(), grey.cols(), 0);
      for (std::size_t i = 0; i < grey.size(); ++i) above.data()[i] = grey.data()[i] >= level;
      bool found = false;
      for (const auto& comp : FloodFill(above, p.connectivity)) {
        if (std::binary_search(comp.begin(), comp.end(), r.pixels.front())) {
          CHECK(comp == r.pixels);
          found = true;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("MSER finds the planted blobs") {
  const auto s = WithBlobs(4);
  const auto regions = MserDetect(s, MserParams{});
  auto has = [&](std::uint32_t f0, std::uint32_t f1, std::uint32_t b0, std::uint32_t b1) {
    const double area = static_cast<double>((f1 - f0 + 1) * (b1 - b0 + 1));
    return std::any_of(regions.begin(), regions.end(), [&](const Region& r) {
      return r.frame_min <= f0 && r.frame_max >= f1 && r.bin_min <= b0 && r.bin_max >= b1 &&
             std::abs(static_cast<double>(r.area_px) - area) <= 0.25 * area;
    });
  };
  CHECK(has(10, 30, 10, 20));
  CHECK(has(60, 70, 35, 50));
}

TEST_CASE("MSER output is unchanged by monotone remapping") {
  const auto s = WithBlobs(5);
  Spectrogram mapped = s;
  for (double& v : mapped.power.data()) v = std::log(v + 1.0) * 3.0 + 2.0;
  const auto a = MserDetect(s, MserParams{});
  const auto b = MserDetect(mapped, MserParams{});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].frame_min == b[i].frame_min);
    CHECK(a[i].frame_max == b[i].frame_max);
    CHECK(a[i].bin_min == b[i].bin_min);
    CHECK(a[i].bin_max == b[i].bin_max);
    CHECK(a[i].area_px == b[i].area_px);
  }
}

TEST_CASE("MSER on a constant spectrogram finds nothing") {
  CHECK(MserDetect(Blank(50, 40, 3.0), MserParams{}).empty());
}

TEST_CASE("MSER recovers an 8x8 rectangle and separates two rectangles") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.9, 1.1);
  Spectrogram s = Blank(60, 40);
  for (double& v : s.power.data()) v = u(rng);
  auto rect = [&](std::uint32_t f0, std::uint32_t b0) {
    for (std::uint32_t f = f0; f < f0 + 8; ++f) {
      for (std::uint32_t b = b0; b < b0 + 8; ++b) s.power(f, b) = 10.0 * u(rng);
    }
  };
  auto contains = [](const Region& r, std::uint32_t f0, std::uint32_t b0) {
    return r.frame_min <= f0 && r.frame_max >= f0 + 7 && r.bin_min <= b0 && r.bin_max >= b0 + 7;
  };
  rect(20, 15);
  const auto one = MserDetect(s, MserParams{});
  bool near_64 = false;
  for (const Region& r : one) {
    if (contains(r, 20, 15)) near_64 |= r.area_px >= 48 && r.area_px <= 80;
  }
  CHECK(near_64);
  rect(45, 5);
  const auto two = MserDetect(s, MserParams{});
  const Region* a = nullptr;
  const Region* b = nullptr;
  for (const Region& r : two) {
    if (contains(r, 20, 15) && r.area_px <= 80) a = &r;
    if (contains(r, 45, 5) && r.area_px <= 80) b = &r;
  }
  REQUIRE(a != nullptr);
  REQUIRE(b != nullptr);
  CHECK((a->frame_max < b->frame_min || b->frame_max < a->frame_min));
}

TEST_CASE("filter-merge never invents pixels") {
  const Spectrogram s = Blank(300, 100, 1.0);
  CHECK(FilterMerge({}, RegionBounds{}, MergeGap{1.0, 100.0}).empty());
  std::vector<Region> in;
  std::mt19937_64 rng(24);
  for (int i = 0; i < 30; ++i) {
    const auto f = static_cast<std::uint32_t>(rng() % 280);
    const auto b = static_cast<std::uint32_t>(rng() % 90);
    in.push_back(Box(s, f, f + 1 + rng() % 15, b, b + 1 + rng() % 8));
  }
  const auto out = FilterMerge(in, RegionBounds{}, MergeGap{0.05, 10.0});
  CHECK(out.size() <= in.size());
  std::size_t total = 0;
  for (const Region& r : out) {
    total += r.area_px;
    for (const Pixel& p : r.pixels) {
      CHECK(std::any_of(in.begin(), in.end(), [&](const Region& src) {
        return std::binary_search(src.pixels.begin(), src.pixels.end(), p);
      }));
    }
  }
  CHECK(total > 0);
}

TEST_CASE("patch resampling identities") {
  const Spectrogram flat = Blank(20, 20, 4.25);
  const MatrixD c = ExtractPatch(flat.power, Box(flat, 3, 9, 2, 12), 32, 64, 0.1);
  for (double v : c.data()) CHECK(v == 4.25);
  Spectrogram s = Blank(20, 20);
  std::mt19937_64 rng(25);
  for (double& v : s.power.data()) v = static_cast<double>(rng() % 1000);
  const MatrixD id = ExtractPatch(s.power, Box(s, 4, 10, 6, 9), 4, 7, 0.0);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t col = 0; col < 7; ++col) CHECK(id(r, col) == s.power(4 + col, 6 + r));
  }
  MatrixD checker(2, 2);
  checker(0, 0) = 0;
  checker(0, 1) = 1;
  checker(1, 0) = 1;
  checker(1, 1) = 0;
  CHECK(ResampleWindow(checker, 0, 1, 0, 1, 3, 3)(1, 1) == 0.5);
}
