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

#include <algorithm>
#include <array>
#include <string>

#include "mch/blend.hpp"
#include "mch/types.hpp"

// GTM harmonization: per-pair boundary tone curves built from two cameras'
// GTM LUTs, and their spatially blended, pixel-value-dependent application.

namespace mch {

// Entry-wise arithmetic mean; the mean of two monotone tables is monotone.
inline GtmLut average_lut(const GtmLut& lut1, const GtmLut& lut2) {
  GtmLut avg;
  for (int i = 0; i < 256; ++i) avg[i] = (lut1[i] + lut2[i]) / 2.0;
  return avg;
}

// 256-point real-valued inverse of a monotone LUT, tabulated at integer
// outputs y = 0..255:
//   - strictly increasing regions invert by linear interpolation, so
//     inv(lut(v)) = v within +-0.5;
//   - plateaus map to the lowest index attaining the value;
//   - y below lut(0) maps to 0, y above lut(255) maps to 255.
inline std::array<double, 256> invert_lut(const GtmLut& lut) {
  std::array<double, 256> inv{};
  for (int y = 0; y < 256; ++y) {
    const double target = static_cast<double>(y);
    if (target <= lut[0]) {
      inv[static_cast<std::size_t>(y)] = 0.0;
      continue;
    }
    if (target > lut[255]) {
      inv[static_cast<std::size_t>(y)] = 255.0;
      continue;
    }
    // First index whose entry reaches the target; entries[v-1] < target.
    const auto it = std::lower_bound(lut.entries.begin(), lut.entries.end(), target);
    const int v = static_cast<int>(it - lut.entries.begin());
    if (lut[v] == target) {
      inv[static_cast<std::size_t>(y)] = static_cast<double>(v);
    } else {
      const double lo = lut[v - 1];
      inv[static_cast<std::size_t>(y)] = (v - 1) + (target - lo) / (lut[v] - lo);
    }
  }
  return inv;
}

// Per-pair tone correction mapping a camera's already-tone-mapped values
// toward the pair-averaged tone response. Identity when the two source LUTs
// are equal (compose mode).
struct CorrectionLut {
  std::array<double, 256> entries{};
  GtmMode mode = GtmMode::compose;

  // Linear interpolation at fractional inputs; inputs above 255 (possible
  // after AWB gains > 1) extrapolate the last segment slope. Clamping to
  // storage range happens at final output, not here.
  double eval(double v) const {
    if (v <= 0.0) return entries[0];
    if (v >= 255.0) return entries[255] + (entries[255] - entries[254]) * (v - 255.0);
    const int i = static_cast<int>(v);
    const double t = v - i;
    return entries[i] + (entries[i + 1] - entries[i]) * t;
  }

  double max_abs_deviation() const {
    double m = 0.0;
    for (int v = 0; v < 256; ++v) m = std::max(m, std::abs(entries[static_cast<std::size_t>(v)] - v));
    return m;
  }
};

// Build the boundary correction curve for one camera of a pair.
//
// compose (default): corr(v) = lut_avg(invert(lut_self)(v)) — undo this
// camera's tone curve, apply the pair average. Outside lut_self's output
// range the composition is extended linearly with slope 1 (continuous at the
// junctions); this keeps corr an exact identity for equal LUTs and keeps the
// correction direction consistent for values the camera's curve cannot
// produce.
//
// literal-average: corr(v) = lut_avg(v) used directly.
//
// The result is re-monotonized by cumulative max and clamped to [0,255].
inline CorrectionLut boundary_correction_lut(const GtmLut& lut_self, const GtmLut& lut_avg,
                                             GtmMode mode) {
  CorrectionLut corr;
  corr.mode = mode;
  if (mode == GtmMode::literal_average) {
    corr.entries = lut_avg.entries;
  } else {
    const std::array<double, 256> inv = invert_lut(lut_self);
    const double low_offset = lut_avg[0] - lut_self[0];
    const double high_offset = lut_avg[255] - lut_self[255];
    for (int v = 0; v < 256; ++v) {
      const double value = static_cast<double>(v);
      if (value < lut_self[0])
        corr.entries[static_cast<std::size_t>(v)] = value + low_offset;
      else if (value > lut_self[255])
        corr.entries[static_cast<std::size_t>(v)] = value + high_offset;
      else
        corr.entries[static_cast<std::size_t>(v)] = lut_avg.eval(inv[static_cast<std::size_t>(v)]);
    }
  }
  double running = 0.0;
  for (int v = 0; v < 256; ++v) {
    running = std::max(running, corr.entries[static_cast<std::size_t>(v)]);
    corr.entries[static_cast<std::size_t>(v)] = std::clamp(running, 0.0, 255.0);
  }
  return corr;
}

// Blend each pixel toward its corrected value: out = (1-w)*v + w*corr(v).
// Algebraically identical to v * spatial_gain(corr(v)/v, w) for v > 0 and
// singularity-free at v = 0. The same correction applies to all three
// channels (the LUT is channel-shared).
inline void apply_gtm_half_inplace(WorkingImage& img, Side side, const CorrectionLut& corr,
                                   const BlendWeights& weights) {
  if (weights.width != img.width)
    throw Error(Errc::dimension_mismatch, "weights built for width " + std::to_string(weights.width) +
                                              ", image width is " + std::to_string(img.width));
  if (weights.side != side)
    throw Error(Errc::dimension_mismatch, std::string("weights built for the ") + side_name(weights.side) +
                                              " half, requested " + side_name(side));

  const int x0 = weights.first_column();
  const int n = weights.column_count();
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < img.height; ++y) {
      double* row = &img.data[img.index(c, y, 0)];
      for (int i = 0; i < n; ++i) {
        const double w = weights.weights[static_cast<std::size_t>(i)];
        const double v = row[x0 + i];
        row[x0 + i] = (1.0 - w) * v + w * corr.eval(v);
      }
    }
  }
}

inline WorkingImage apply_gtm_half(const WorkingImage& image, Side side, const CorrectionLut& corr,
                                   const BlendWeights& weights) {
  WorkingImage out = image;
  apply_gtm_half_inplace(out, side, corr, weights);
  return out;
}

}  // namespace mch
