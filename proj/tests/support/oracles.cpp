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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace asr::testing {

std::vector<std::vector<Pixel>> FloodFill(const MaskMatrix& mask,
                                          int connectivity) {
  const long rows = static_cast<long>(mask.rows());
  const long cols = static_cast<long>(mask.cols());
  MaskMatrix seen(mask.rows(), mask.cols(), 0);
  std::vector<std::vector<Pixel>> out;
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      if (!mask(r, c) || seen(r, c)) continue;
      std::vector<Pixel> comp;
      std::vector<std::pair<long, long>> stack{{r, c}};
      seen(r, c) = 1;
      while (!stack.empty()) {
        auto [y, x] = stack.back();
        stack.pop_back();
        comp.push_back({static_cast<std::uint32_t>(y), static_cast<std::uint32_t>(x)});
        for (long dy = -1; dy <= 1; ++dy) {
          for (long dx = -1; dx <= 1; ++dx) {
            if (dy == 0 && dx == 0) continue;
            if (connectivity == 4 && dy != 0 && dx != 0) continue;
            const long ny = y + dy, nx = x + dx;
            if (ny < 0 || nx < 0 || ny >= rows || nx >= cols) continue;
            if (!mask(ny, nx) || seen(ny, nx)) continue;
            seen(ny, nx) = 1;
            stack.emplace_back(ny, nx);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> NaiveDftPower(const std::vector<double>& frame,
                                  const std::vector<double>& window) {
  const std::size_t n = frame.size();
  std::vector<double> power(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    long double re = 0, im = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double phase =
          -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * t) % n) / n;
      const long double v = static_cast<long double>(frame[t]) * window[t];
      re += v * std::cos(phase);
      im += v * std::sin(phase);
    }
    power[k] = static_cast<double>(re * re + im * im);
  }
  return power;
}

std::vector<double> HogReference(const MatrixD& patch, const HogParams& params) {
  const long rows = static_cast<long>(patch.rows());
  const long cols = static_cast<long>(patch.cols());
  const long cell = params.cell_px;
  const long bc = params.block_cells;
  const int nb = params.n_bins;
  const long ncr = rows / cell, ncc = cols / cell;
  auto at = [&](long r, long c) {
    r = std::clamp(r, 0L, rows - 1);
    c = std::clamp(c, 0L, cols - 1);
    return patch(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  auto cell_hist = [&](long cr, long cc) {
    std::vector<double> h(static_cast<std::size_t>(nb), 0.0);
    for (long r = cr * cell; r < (cr + 1) * cell; ++r) {
      for (long c = cc * cell; c < (cc + 1) * cell; ++c) {
        const double gx = at(r, c + 1) - at(r, c - 1);
        const double gy = at(r + 1, c) - at(r - 1, c);
        const double mag = std::sqrt(gx * gx + gy * gy);
        if (mag == 0.0) continue;
        double theta = std::atan2(gy, gx);
        theta = std::fmod(theta + std::numbers::pi, std::numbers::pi);
        const double width = std::numbers::pi / nb;
        for (int b = 0; b < nb; ++b) {
          double d = std::fabs(theta - b * width);
          d = std::min(d, std::numbers::pi - d);
          const double w = std::max(0.0, 1.0 - d / width);
          h[static_cast<std::size_t>(b)] += mag * w;
        }
      }
    }
    return h;
  };
  std::vector<double> out;
  for (long br = 0; br + bc <= ncr; ++br) {
    for (long bcol = 0; bcol + bc <= ncc; ++bcol) {
      std::vector<double> block;
      for (long i = 0; i < bc; ++i) {
        for (long j = 0; j < bc; ++j) {
          const auto h = cell_hist(br + i, bcol + j);
          block.insert(block.end(), h.begin(), h.end());
        }
      }
      double sq = 0.0;
      for (double v : block) sq += v * v;
      for (double v : block) out.push_back(v / std::sqrt(sq + 1e-6 * 1e-6));
    }
  }
  return out;
}

std::vector<double> MlpNumericGradient(const MlpModel& model,
                                       const MatrixD& x_scaled,
                                       const std::vector<double>& targets,
                                       const std::vector<double>& weights,
                                       double l2, double step) {
  const std::vector<double> p0 = model.Parameters();
  std::vector<double> grad(p0.size());
  MlpModel m = model;
  for (std::size_t i = 0; i < p0.size(); ++i) {
    std::vector<double> p = p0;
    p[i] = p0[i] + step;
    m.SetParameters(p);
    const double up = MlpLossAndGradient(m, x_scaled, targets, weights, l2, nullptr);
    p[i] = p0[i] - step;
    m.SetParameters(p);
    const double down = MlpLossAndGradient(m, x_scaled, targets, weights, l2, nullptr);
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

std::vector<std::size_t> ComponentAreasByLevel(
    const Matrix<std::uint8_t>& grey, std::size_t r, std::size_t c,
    int connectivity) {
  std::vector<std::size_t> areas(256, 0);
  for (int level = 0; level < 256; ++level) {
    if (grey(r, c) < level) continue;
    MaskMatrix mask(grey.rows(), grey.cols(), 0);
    for (std::size_t y = 0; y < grey.rows(); ++y) {
      for (std::size_t x = 0; x < grey.cols(); ++x) mask(y, x) = grey(y, x) >= level;
    }
    for (const auto& comp : FloodFill(mask, connectivity)) {
      const Pixel p{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)};
      if (std::binary_search(comp.begin(), comp.end(), p)) {
        areas[static_cast<std::size_t>(level)] = comp.size();
        break;
      }
    }
  }
  return areas;
}

double BruteProminence(const std::vector<double>& s, std::size_t i) {
  const double h = s[i];
  double left_min = h;
  for (std::size_t j = i; j-- > 0;) {
    if (s[j] > h) break;
    left_min = std::min(left_min, s[j]);
  }
  double right_min = h;
  for (std::size_t j = i + 1; j < s.size(); ++j) {
    if (s[j] > h) break;
    right_min = std::min(right_min, s[j]);
  }
  return h - std::max(left_min, right_min);
}

MaskMatrix RandomMask(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                      double density) {
  std::bernoulli_distribution bit(density);
  MaskMatrix m(rows, cols, 0);
  for (auto& v : m.data()) v = bit(rng) ? 1 : 0;
  return m;
}

}  // namespace asr::testing
