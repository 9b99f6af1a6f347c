/*
 * Copyright (C) 2026 The mch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "mch/types.hpp"

// Logistic blending curve and the spatial gain interpolation scaffold.
//
// Gains ramp from 1 at the image center column to the full boundary gain at
// the outermost column, following a scaled/shifted logistic whose clamped
// endpoints land exactly on 0 and 1.

namespace mch {

inline constexpr double kLogisticScale = 1.005;
inline constexpr double kLogisticShift = -0.0025;

// Which half of an image a weight table (and a gain application) covers.
// The center column W/2 belongs to the right half, with weight 0; the left
// half covers [0, W/2).
enum class Side { left_half, right_half };

inline const char* side_name(Side s) { return s == Side::left_half ? "left" : "right"; }

// f_standard(x) = 1/(1+exp(-x)) on [-6, 6].
inline double logistic_standard(double x) {
  if (x < -6.0 || x > 6.0)
    throw Error(Errc::domain_error, "logistic_standard input must lie in [-6,6], got " + std::to_string(x));
  return 1.0 / (1.0 + std::exp(-x));
}

// Pre-clamp value of the modified logistic: SCALE/(1+exp(-x+6)) + SHIFT.
// Slightly undershoots 0 at x=0 and overshoots 1 at x=12 (|delta| ~ 1.5e-5).
inline double logistic_mod_raw(double x) {
  if (x < 0.0 || x > 12.0)
    throw Error(Errc::domain_error, "logistic_mod input must lie in [0,12], got " + std::to_string(x));
  return kLogisticScale / (1.0 + std::exp(-x + 6.0)) + kLogisticShift;
}

// Modified logistic on [0,12], truncated to [0,1]; hits 0 and 1 exactly at
// the endpoints.
inline double logistic_mod(double x) {
  return std::clamp(logistic_mod_raw(x), 0.0, 1.0);
}

// Per-column blend weights over one image half. Weight 0 keeps the original
// pixel, weight 1 applies the full boundary gain.
//
// right half: index i covers column W/2 + i, weight rising 0 -> 1 outward.
// left half:  index i covers column i, weight falling 1 -> 0 toward center.
struct BlendWeights {
  int width = 0;
  Side side = Side::right_half;
  std::vector<double> weights;

  int first_column() const { return side == Side::right_half ? width / 2 : 0; }
  int column_count() const { return width / 2; }

  double at_column(int x) const {
    return weights[static_cast<std::size_t>(x - first_column())];
  }
};

// Build the weight table for one (width, side). Column indices are remapped
// linearly onto [0,12] so that the outer boundary column lands exactly on 12
// (denominator W/2 - 1); the clamp then pins the boundary weight to exactly 1.
inline BlendWeights make_blend_weights(int width, Side side) {
  if (width < 4 || width % 2 != 0)
    throw Error(Errc::domain_error, "blend weights need an even width >= 4, got " + std::to_string(width));
  const int half = width / 2;
  const double denom = static_cast<double>(half - 1);

  BlendWeights bw;
  bw.width = width;
  bw.side = side;
  bw.weights.resize(static_cast<std::size_t>(half));
  for (int i = 0; i < half; ++i) {
    const double f = logistic_mod(static_cast<double>(i) * 12.0 / denom);
    bw.weights[static_cast<std::size_t>(i)] = side == Side::right_half ? f : 1.0 - f;
  }
  return bw;
}

// g(x) = 1 + (boundary_gain - 1) * weight. Exact at both endpoints:
// weight 0 keeps the original value, weight 1 applies the boundary gain
// (the endpoint is returned directly; 1 + (g-1) re-rounds in floating point).
inline double spatial_gain(double boundary_gain, double weight) {
  if (weight == 1.0) return boundary_gain;
  return 1.0 + (boundary_gain - 1.0) * weight;
}

// Weight tables are pure functions of (width, side); the pipeline reuses one
// cache across cameras, channels and frames so exp() is never evaluated per
// pixel.
class BlendWeightCache {
 public:
  const BlendWeights& get(int width, Side side) {
    const auto key = std::make_pair(width, static_cast<int>(side));
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, make_blend_weights(width, side)).first;
    return it->second;
  }

 private:
  std::map<std::pair<int, int>, BlendWeights> cache_;
};

}  // namespace mch
