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

#include "mch/awb.hpp"
#include "mch/blend.hpp"
#include "mch/gtm.hpp"
#include "mch/types.hpp"

// Ring orchestration: every camera blends its right half with its right
// neighbor and its left half with its left neighbor, AWB stage first, GTM
// stage second. No camera is a reference; both members of a pair move toward
// the pair average.

namespace mch {

// Boundary parameters for one adjacent pair (1,2): camera 1's right half and
// camera 2's left half.
struct PairParams {
  BoundaryGains gain1, gain2;
  CorrectionLut corr1, corr2;
};

inline PairParams make_pair_params(const CameraFrame& frame1, const CameraFrame& frame2,
                                   const HarmonizeConfig& cfg) {
  PairParams p;
  if (cfg.enable_awb) std::tie(p.gain1, p.gain2) = awb_boundary_gains(frame1.awb, frame2.awb);
  if (cfg.enable_gtm) {
    const GtmLut avg = average_lut(frame1.gtm, frame2.gtm);
    p.corr1 = boundary_correction_lut(frame1.gtm, avg, cfg.gtm_mode);
    p.corr2 = boundary_correction_lut(frame2.gtm, avg, cfg.gtm_mode);
  } else {
    p.corr1.entries = GtmLut::identity().entries;
    p.corr2.entries = GtmLut::identity().entries;
  }
  return p;
}

// Observability record of what was applied to one half of one camera:
// boundary AWB gains, a correction-LUT summary, and blend weights at 16
// sample columns. Derived data; never re-consumed.
struct SideGainReport {
  BoundaryGains awb;
  std::array<double, 5> corr_samples{};  // correction at v = 0, 64, 128, 192, 255
  double corr_max_abs_dev = 0.0;
  std::vector<std::pair<int, double>> sampled_weights;  // (column, weight)
};

struct CameraGainReport {
  std::string camera;
  SideGainReport left;
  SideGainReport right;
};

struct HarmonizedRig {
  std::vector<CameraFrame> frames;  // harmonized images, original metadata
  std::vector<CameraGainReport> report;
};

namespace detail {

inline SideGainReport make_side_report(const BoundaryGains& g, const CorrectionLut& corr,
                                       const BlendWeights& weights) {
  SideGainReport r;
  r.awb = g;
  const int samples[5] = {0, 64, 128, 192, 255};
  for (int i = 0; i < 5; ++i) r.corr_samples[static_cast<std::size_t>(i)] = corr.entries[static_cast<std::size_t>(samples[i])];
  r.corr_max_abs_dev = corr.max_abs_deviation();
  const int n = weights.column_count();
  const int x0 = weights.first_column();
  for (int j = 0; j < 16; ++j) {
    const int i = (n - 1) * j / 15;
    r.sampled_weights.emplace_back(x0 + i, weights.weights[static_cast<std::size_t>(i)]);
  }
  return r;
}

inline void check_harmonize_cfg(const HarmonizeConfig& cfg) {
  if (!cfg.enable_awb && !cfg.enable_gtm)
    throw Error(Errc::validation_error, "harmonization requested with both AWB and GTM stages disabled");
}

// Apply both stages to one camera's working image. The left half uses the
// (left neighbor, this) pair with this camera in the "camera 2" role; the
// right half uses the (this, right neighbor) pair in the "camera 1" role.
// The two halves are disjoint (the center column belongs to the right half,
// at weight 0), so the composition is column-wise.
inline void harmonize_camera_inplace(WorkingImage& img, const PairParams& left_pair,
                                     const PairParams& right_pair, const HarmonizeConfig& cfg,
                                     const BlendWeights& wl, const BlendWeights& wr) {
  if (cfg.enable_awb) {
    apply_awb_half_inplace(img, Side::left_half, left_pair.gain2, wl);
    apply_awb_half_inplace(img, Side::right_half, right_pair.gain1, wr);
  }
  if (cfg.enable_gtm) {
    apply_gtm_half_inplace(img, Side::left_half, left_pair.corr2, wl);
    apply_gtm_half_inplace(img, Side::right_half, right_pair.corr1, wr);
  }
}

}  // namespace detail

// Harmonize one adjacent pair: returns frame1's working image with its right
// half harmonized and frame2's with its left half harmonized; the opposite
// halves are untouched.
inline std::pair<WorkingImage, WorkingImage> harmonize_pair(const CameraFrame& frame1,
                                                            const CameraFrame& frame2,
                                                            const HarmonizeConfig& cfg) {
  detail::check_harmonize_cfg(cfg);
  if (!frame1.image.same_shape(frame2.image))
    throw Error(Errc::dimension_mismatch, "paired cameras must share dimensions");
  const PairParams p = make_pair_params(frame1, frame2, cfg);
  const BlendWeights wr = make_blend_weights(frame1.image.width, Side::right_half);
  const BlendWeights wl = make_blend_weights(frame2.image.width, Side::left_half);

  WorkingImage out1 = to_working(frame1.image);
  WorkingImage out2 = to_working(frame2.image);
  if (cfg.enable_awb) {
    apply_awb_half_inplace(out1, Side::right_half, p.gain1, wr);
    apply_awb_half_inplace(out2, Side::left_half, p.gain2, wl);
  }
  if (cfg.enable_gtm) {
    apply_gtm_half_inplace(out1, Side::right_half, p.corr1, wr);
    apply_gtm_half_inplace(out2, Side::left_half, p.corr2, wl);
  }
  return {std::move(out1), std::move(out2)};
}

// Real-valued pipeline output, one working image per camera in rig order.
// When cfg.clamp_output is set, values are clamped to [0,255] (no rounding);
// otherwise raw working values are returned.
inline std::vector<WorkingImage> harmonize_rig_real(const RigConfig& rig, const HarmonizeConfig& cfg) {
  detail::check_harmonize_cfg(cfg);
  if (const ValidationResult r = validate_rig(rig); !r.ok())
    throw Error(r.code, r.field + ": " + r.message);

  const int n = rig.size();
  std::vector<PairParams> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    pairs.push_back(make_pair_params(rig.cameras[static_cast<std::size_t>(i)],
                                     rig.cameras[static_cast<std::size_t>(rig.right_neighbor(i))], cfg));

  BlendWeightCache cache;
  const int width = rig.cameras[0].image.width;
  const BlendWeights& wl = cache.get(width, Side::left_half);
  const BlendWeights& wr = cache.get(width, Side::right_half);

  std::vector<WorkingImage> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    WorkingImage img = to_working(rig.cameras[static_cast<std::size_t>(i)].image);
    detail::harmonize_camera_inplace(img, pairs[static_cast<std::size_t>(rig.left_neighbor(i))],
                                     pairs[static_cast<std::size_t>(i)], cfg, wl, wr);
    if (cfg.clamp_output)
      for (double& v : img.data) v = std::clamp(v, 0.0, 255.0);
    out.push_back(std::move(img));
  }
  return out;
}

// Full 8-bit pipeline: AWB stage (if enabled) then GTM stage (if enabled),
// rounded half-up and clamped to storage exactly once at the end.
inline HarmonizedRig harmonize_rig(const RigConfig& rig, const HarmonizeConfig& cfg) {
  detail::check_harmonize_cfg(cfg);
  if (const ValidationResult r = validate_rig(rig); !r.ok())
    throw Error(r.code, r.field + ": " + r.message);

  const int n = rig.size();
  std::vector<PairParams> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    pairs.push_back(make_pair_params(rig.cameras[static_cast<std::size_t>(i)],
                                     rig.cameras[static_cast<std::size_t>(rig.right_neighbor(i))], cfg));

  BlendWeightCache cache;
  const int width = rig.cameras[0].image.width;
  const BlendWeights& wl = cache.get(width, Side::left_half);
  const BlendWeights& wr = cache.get(width, Side::right_half);

  HarmonizedRig result;
  result.frames.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const CameraFrame& src = rig.cameras[static_cast<std::size_t>(i)];
    const PairParams& lp = pairs[static_cast<std::size_t>(rig.left_neighbor(i))];
    const PairParams& rp = pairs[static_cast<std::size_t>(i)];

    WorkingImage img = to_working(src.image);
    detail::harmonize_camera_inplace(img, lp, rp, cfg, wl, wr);

    CameraFrame frame;
    frame.id = src.id;
    frame.awb = src.awb;
    frame.gtm = src.gtm;
    frame.image = quantize_image(img);
    result.frames.push_back(std::move(frame));

    CameraGainReport rep;
    rep.camera = src.id;
    rep.left = detail::make_side_report(lp.gain2, lp.corr2, wl);
    rep.right = detail::make_side_report(rp.gain1, rp.corr1, wr);
    result.report.push_back(std::move(rep));
  }
  return result;
}

}  // namespace mch
