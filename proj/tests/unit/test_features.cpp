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

#include <cmath>
#include <random>
#include <vector>

#include "asr/error.hpp"
#include "asr/features.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asr;

namespace {

MatrixD RandomPatch(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixD m(rows, cols);
  for (double& v : m.data()) v = u(rng);
  return m;
}

}  // namespace

TEST_CASE("grid mask of an all-ones mask is all ones") {
  const auto f = GridMaskFeatures(MaskMatrix(17, 23, 1), 5, 8);
  CHECK(f.size() == 40);
  CHECK(f.fingerprint == "gridmask:5x8");
  for (double v : f.values) CHECK(v == 1.0);
}

TEST_CASE("grid mask cells absorb the remainder in the last row and column") {
  MaskMatrix m(7, 5, 0);
  m(6, 4) = 1;
  m(0, 0) = 1;
  const auto f = GridMaskFeatures(m, 2, 2);
  // Cells are 3x2 except the last row (4 rows) and column (3 columns).
  CHECK(f.values[0] == doctest::Approx(1.0 / 6.0));
  CHECK(f.values[1] == 0.0);
  CHECK(f.values[2] == 0.0);
  CHECK(f.values[3] == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("grid mask values are the mean occupancy of each cell") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 5 + rng() % 30, cols = 8 + rng() % 30;
    const auto m = asr::testing::RandomMask(rng, rows, cols, 0.3);
    const auto f = GridMaskFeatures(m, 5, 8);
    double weighted = 0.0;
    const std::size_t ch = rows / 5, cw = cols / 8;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 8; ++j) {
        const std::size_t h = i == 4 ? rows - 4 * ch : ch;
        const std::size_t w = j == 7 ? cols - 7 * cw : cw;
        weighted += f.values[i * 8 + j] * static_cast<double>(h * w);
      }
    }
    std::size_t set = 0;
    for (auto b : m.data()) set += b;
    CHECK(weighted == doctest::Approx(static_cast<double>(set)));
  }
}

TEST_CASE("grid mask rejects masks smaller than the grid") {
  CHECK_THROWS_AS(GridMaskFeatures(MaskMatrix(4, 10, 1), 5, 8), Error);
  CHECK_THROWS_AS(GridMaskFeatures(MaskMatrix(4, 10, 1), 0, 8), Error);
}

TEST_CASE("HOG lengths") {
  const HogParams p;
  CHECK(HogLength(p, 16, 16) == 36);
  CHECK(HogLength(p, 32, 64) == 756);
  CHECK(HogLength(p, 8, 64) == 0);
  CHECK(HogFeatures(MatrixD(32, 64, 0.0), p).size() == 756);
  CHECK(HogFeatures(MatrixD(32, 64, 0.0), p).fingerprint == HogFingerprint(p, 32, 64));
}

TEST_CASE("HOG of a constant patch is all zeros") {
  for (double v : HogFeatures(MatrixD(16, 16, 3.0), HogParams{}).values) CHECK(v == 0.0);
}

TEST_CASE("HOG blocks are unit length when the patch has texture") {
  std::mt19937_64 rng(32);
  const auto f = HogFeatures(RandomPatch(rng, 32, 48), HogParams{});
  for (std::size_t b = 0; b < f.size(); b += 36) {
    double sq = 0;
    for (std::size_t i = b; i < b + 36; ++i) sq += f.values[i] * f.values[i];
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("HOG orientation of ramps") {
  MatrixD along_cols(16, 16), along_rows(16, 16);
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t c = 0; c < 16; ++c) {
      along_cols(r, c) = static_cast<double>(c);
      along_rows(r, c) = static_cast<double>(r);
    }
  }
  const auto h = HogFeatures(along_cols, HogParams{});
  for (std::size_t i = 0; i < 36; ++i) CHECK(h.values[i] == doctest::Approx(i % 9 == 0 ? 0.5 : 0.0));
  const auto v = HogFeatures(along_rows, HogParams{});
  for (std::size_t i = 0; i < 36; ++i) {
    const bool split = i % 9 == 4 || i % 9 == 5;
    CHECK(v.values[i] == doctest::Approx(split ? std::sqrt(0.125) : 0.0));
  }
}

TEST_CASE("HOG matches the per-pixel reference") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    HogParams p;
    p.cell_px = trial % 3 == 0 ? 4 : 8;
    p.n_bins = trial % 2 ? 9 : 6;
    const auto patch = RandomPatch(rng, 32, 64);
    const auto got = HogFeatures(patch, p);
    const auto want = asr::testing::HogReference(patch, p);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(got.values[i] == doctest::Approx(want[i]).epsilon(1e-9));
  }
}

TEST_CASE("HOG rejects patches that do not tile") {
  CHECK_THROWS_AS(HogFeatures(MatrixD(20, 16, 1.0), HogParams{}), Error);
  CHECK_THROWS_AS(HogFeatures(MatrixD(8, 16, 1.0), HogParams{}), Error);
  HogParams bad;
  bad.n_bins = 1;
  CHECK_THROWS_AS(HogFeatures(MatrixD(16, 16, 1.0), bad), Error);
}

TEST_CASE("grid mask small examples") {
  CHECK(GridMaskFeatures(MaskMatrix(4, 4, 1), 2, 2).values == std::vector<double>{1, 1, 1, 1});
  MaskMatrix top(4, 4, 0);
  for (std::size_t c = 0; c < 4; ++c) top(0, c) = top(1, c) = 1;
  CHECK(GridMaskFeatures(top, 2, 2).values == std::vector<double>{1, 1, 0, 0});
}

TEST_CASE("16x16 grid cells equal brute-force counts") {
  std::mt19937_64 rng(34);
  const auto m = asr::testing::RandomMask(rng, 16, 16, 0.5);
  const auto f = GridMaskFeatures(m, 4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      int n = 0;
      for (int r = 4 * i; r < 4 * i + 4; ++r) {
        for (int c = 4 * j; c < 4 * j + 4; ++c) n += m(r, c);
      }
      CHECK(f.values[i * 4 + j] == n / 16.0);
    }
  }
  for (double v : f.values) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("HOG is invariant to offset and positive scale") {
  std::mt19937_64 rng(35);
  MatrixD patch(32, 64);
  for (double& v : patch.data()) v = static_cast<double>(rng() % 256) / 8.0;
  MatrixD shifted = patch, scaled = patch;
  for (double& v : shifted.data()) v += 17.0;
  for (double& v : scaled.data()) v *= 3.7;
  const auto base = HogFeatures(patch, HogParams{});
  CHECK(HogFeatures(shifted, HogParams{}).values == base.values);
  const auto s = HogFeatures(scaled, HogParams{});
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(s.values[i] == doctest::Approx(base.values[i]).epsilon(1e-9));
}

TEST_CASE("HOG length follows the closed form") {
  std::mt19937_64 rng(36);
  for (int cell : {2, 4, 8}) {
    for (int block : {1, 2, 3}) {
      for (int bins : {4, 9}) {
        HogParams p{cell, block, bins};
        const std::size_t rows = cell * (block + rng() % 4), cols = cell * (block + rng() % 6);
        const std::size_t want = (rows / cell - block + 1) * (cols / cell - block + 1) * block * block * bins;
        CHECK(HogLength(p, rows, cols) == want);
        CHECK(HogFeatures(RandomPatch(rng, rows, cols), p).size() == want);
      }
    }
  }
}
