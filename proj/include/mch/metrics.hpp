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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mch/pipeline.hpp"
#include "mch/types.hpp"

// Objective seam and quality metrics. Seam discontinuity is the proxy for
// visible stitching seams: the mean absolute difference between the
// corresponding overlap columns of two adjacent cameras.

namespace mch {

// PSNR value reported when MSE is exactly 0 (identical images).
inline constexpr double kPsnrCapDb = 120.0;

// Mean absolute per-pixel per-channel difference between frame_a's rightmost
// overlap_cols columns and frame_b's leftmost overlap_cols columns. In
// synthetic rigs these columns carry corresponding content by construction.
inline double seam_discontinuity(const ImageBuffer& frame_a, const ImageBuffer& frame_b,
                                 int overlap_cols) {
  if (frame_a.height != frame_b.height)
    throw Error(Errc::dimension_mismatch, "seam metric requires equal heights");
  if (overlap_cols < 1 || overlap_cols > frame_a.width || overlap_cols > frame_b.width)
    throw Error(Errc::dimension_mismatch, "overlap_cols must satisfy 1 <= k <= width");

  const int xa = frame_a.width - overlap_cols;
  double sum = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < frame_a.height; ++y)
      for (int i = 0; i < overlap_cols; ++i)
        sum += std::abs(static_cast<double>(frame_a.at(c, y, xa + i)) -
                        static_cast<double>(frame_b.at(c, y, i)));
  return sum / (3.0 * frame_a.height * overlap_cols);
}

// Same patch comparison on the Rec.601 luma plane; used to isolate tone
// (GTM) discontinuities from color ones.
inline double seam_discontinuity_luma(const ImageBuffer& frame_a, const ImageBuffer& frame_b,
                                      int overlap_cols) {
  if (frame_a.height != frame_b.height)
    throw Error(Errc::dimension_mismatch, "seam metric requires equal heights");
  if (overlap_cols < 1 || overlap_cols > frame_a.width || overlap_cols > frame_b.width)
    throw Error(Errc::dimension_mismatch, "overlap_cols must satisfy 1 <= k <= width");

  auto luma = [](const ImageBuffer& img, int y, int x) {
    return 0.299 * img.at(0, y, x) + 0.587 * img.at(1, y, x) + 0.114 * img.at(2, y, x);
  };
  const int xa = frame_a.width - overlap_cols;
  double sum = 0.0;
  for (int y = 0; y < frame_a.height; ++y)
    for (int i = 0; i < overlap_cols; ++i)
      sum += std::abs(luma(frame_a, y, xa + i) - luma(frame_b, y, i));
  return sum / (static_cast<double>(frame_a.height) * overlap_cols);
}

// Max adjacent-column step of an applied gain profile.
inline double gain_smoothness(std::span<const double> gains_per_column) {
  if (gains_per_column.size() < 2)
    throw Error(Errc::domain_error, "gain smoothness needs >= 2 columns");
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < gains_per_column.size(); ++i)
    m = std::max(m, std::abs(gains_per_column[i + 1] - gains_per_column[i]));
  return m;
}

inline double psnr(const ImageBuffer& image, const ImageBuffer& reference) {
  if (!image.same_shape(reference))
    throw Error(Errc::dimension_mismatch, "PSNR requires equal dimensions");
  double mse = 0.0;
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    const double d = static_cast<double>(image.data[i]) - static_cast<double>(reference.data[i]);
    mse += d * d;
  }
  mse /= static_cast<double>(image.data.size());
  if (mse == 0.0) return kPsnrCapDb;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

// ---------------------------------------------------------------------------
// Seam report

struct PairSeam {
  std::string camera_a, camera_b;  // a's right edge meets b's left edge
  double pre = 0.0;
  double post = 0.0;
  // (pre - post) / pre; NaN when pre == 0 (undefined).
  double reduction = 0.0;
};

struct CameraGainStep {
  std::string camera;
  double max_step = 0.0;
};

struct SeamReport {
  std::vector<PairSeam> pairs;
  std::vector<CameraGainStep> gain_steps;
};

// The combined applied-gain profile of one half at a reference pixel value:
// awb spatial gain times the GTM blend gain evaluated at v = 128. Used for
// the per-camera smoothness entries of the seam report.
inline std::vector<double> combined_gain_profile(const BoundaryGains& g, const CorrectionLut& corr,
                                                 const BlendWeights& weights, int channel,
                                                 double ref_value = 128.0) {
  std::vector<double> profile(static_cast<std::size_t>(weights.column_count()));
  const double corrected = corr.eval(ref_value);
  for (int i = 0; i < weights.column_count(); ++i) {
    const double w = weights.weights[static_cast<std::size_t>(i)];
    const double awb_gain = spatial_gain(g[channel], w);
    const double gtm_gain = ((1.0 - w) * ref_value + w * corrected) / ref_value;
    profile[static_cast<std::size_t>(i)] = awb_gain * gtm_gain;
  }
  return profile;
}

// Pre/post seam discontinuities per adjacent pair plus per-camera max
// applied-gain steps, recomputed from the original rig's metadata.
inline SeamReport make_seam_report(const RigConfig& original, const std::vector<ImageBuffer>& harmonized,
                                   const HarmonizeConfig& cfg) {
  if (harmonized.size() != original.cameras.size())
    throw Error(Errc::dimension_mismatch, "harmonized frame count does not match the rig");
  const int n = original.size();
  SeamReport report;
  for (int i = 0; i < n; ++i) {
    const int j = original.right_neighbor(i);
    PairSeam s;
    s.camera_a = original.cameras[static_cast<std::size_t>(i)].id;
    s.camera_b = original.cameras[static_cast<std::size_t>(j)].id;
    const int k = original.pair_overlap(i);
    s.pre = seam_discontinuity(original.cameras[static_cast<std::size_t>(i)].image,
                               original.cameras[static_cast<std::size_t>(j)].image, k);
    s.post = seam_discontinuity(harmonized[static_cast<std::size_t>(i)], harmonized[static_cast<std::size_t>(j)], k);
    s.reduction = s.pre > 0.0 ? (s.pre - s.post) / s.pre : std::numeric_limits<double>::quiet_NaN();
    report.pairs.push_back(std::move(s));
  }

  BlendWeightCache cache;
  const int width = original.cameras[0].image.width;
  const BlendWeights& wl = cache.get(width, Side::left_half);
  const BlendWeights& wr = cache.get(width, Side::right_half);
  for (int i = 0; i < n; ++i) {
    const PairParams left = make_pair_params(original.cameras[static_cast<std::size_t>(original.left_neighbor(i))],
                                             original.cameras[static_cast<std::size_t>(i)], cfg);
    const PairParams right = make_pair_params(original.cameras[static_cast<std::size_t>(i)],
                                              original.cameras[static_cast<std::size_t>(original.right_neighbor(i))], cfg);
    CameraGainStep step;
    step.camera = original.cameras[static_cast<std::size_t>(i)].id;
    for (int c = 0; c < 3; ++c) {
      const auto pl = combined_gain_profile(left.gain2, left.corr2, wl, c);
      const auto pr = combined_gain_profile(right.gain1, right.corr1, wr, c);
      step.max_step = std::max({step.max_step, gain_smoothness(pl), gain_smoothness(pr)});
    }
    report.gain_steps.push_back(std::move(step));
  }
  return report;
}

}  // namespace mch
