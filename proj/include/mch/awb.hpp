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

#include <string>
#include <utility>
#include <vector>

#include "mch/blend.hpp"
#include "mch/types.hpp"

// AWB harmonization: boundary gains from pair-averaged white balance, and
// their spatially blended application over an image half.

namespace mch {

// Per-channel gains to apply at the outer boundary column of one half.
// For a pair (1,2), gain1*AWB1 = gain2*AWB2 per channel: both cameras meet
// at the averaged white balance.
struct BoundaryGains {
  double r = 1.0;
  double g = 1.0;
  double b = 1.0;

  double operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
  double& operator[](int c) { return c == 0 ? r : (c == 1 ? g : b); }
};

// Boundary gains for camera 1's right edge and camera 2's left edge:
// g1 = ((AWB1 + AWB2)/2) / AWB1,  g2 = ((AWB1 + AWB2)/2) / AWB2, per channel.
// Symmetric under exchange: swapping the pair swaps the returned triples.
inline std::pair<BoundaryGains, BoundaryGains> awb_boundary_gains(const AwbGains& awb1,
                                                                  const AwbGains& awb2) {
  BoundaryGains g1, g2;
  for (int c = 0; c < 3; ++c) {
    if (!(awb1[c] > 0.0) || !(awb2[c] > 0.0))
      throw Error(Errc::non_positive_awb_gain, "AWB gains must be strictly positive");
    const double avg = (awb1[c] + awb2[c]) / 2.0;
    g1[c] = avg / awb1[c];
    g2[c] = avg / awb2[c];
  }
  return {g1, g2};
}

// Multiply each pixel of the half by spatial_gain(boundary[c], weight(x)).
// Columns outside the half are untouched; no rounding or clamping happens
// here (the GTM stage consumes unclamped values).
inline void apply_awb_half_inplace(WorkingImage& img, Side side, const BoundaryGains& boundary,
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
    // Per-column gains are shared across rows.
    std::vector<double> gains(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      gains[static_cast<std::size_t>(i)] = spatial_gain(boundary[c], weights.weights[static_cast<std::size_t>(i)]);
    for (int y = 0; y < img.height; ++y) {
      double* row = &img.data[img.index(c, y, 0)];
      for (int i = 0; i < n; ++i) row[x0 + i] *= gains[static_cast<std::size_t>(i)];
    }
  }
}

// Convenience form matching the stage contract: 8-bit input, real-valued
// working copy out.
inline WorkingImage apply_awb_half(const ImageBuffer& image, Side side, const BoundaryGains& boundary,
                                   const BlendWeights& weights) {
  WorkingImage w = to_working(image);
  apply_awb_half_inplace(w, side, boundary, weights);
  return w;
}

}  // namespace mch
