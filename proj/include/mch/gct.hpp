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

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mch/pipeline.hpp"
#include "mch/types.hpp"

// Patch-based global color transfer baseline: per-channel mean/std matching
// between overlap patches, applied camera-by-camera along a reference chain.
// Kept for comparison; its documented weaknesses (reference sensitivity,
// disparity in the overlap) are exactly what the metadata pipeline avoids.

namespace mch {

enum class TransferSpace { rgb, decorrelated };

inline constexpr double kStdEps = 1e-6;     // zero-std guard for flat patches
inline constexpr double kLogFloor = 1.0 / 255.0;  // floor before log10 in the decorrelated space

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// RGB -> LMS cone response matrix of the Reinhard transfer method.
inline constexpr Mat3 kRgbToLms = {{{0.3811, 0.5783, 0.0402},
                                    {0.1967, 0.7244, 0.0782},
                                    {0.0241, 0.1288, 0.8444}}};

// log-LMS -> decorrelated l-alpha-beta axes.
inline const Mat3 kLmsToLab = {{{1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)},
                                {1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0)},
                                {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0}}};

inline Vec3 mat_mul(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

// Exact numerical inverse; the printed 4-digit inverse of the cone matrix is
// too coarse for a clean round trip.
inline Mat3 mat_inverse(const Mat3& m) {
  const double a = m[0][0], b = m[0][1], c = m[0][2];
  const double d = m[1][0], e = m[1][1], f = m[1][2];
  const double g = m[2][0], h = m[2][1], i = m[2][2];
  const double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  const double inv = 1.0 / det;
  return {{{(e * i - f * h) * inv, (c * h - b * i) * inv, (b * f - c * e) * inv},
           {(f * g - d * i) * inv, (a * i - c * g) * inv, (c * d - a * f) * inv},
           {(d * h - e * g) * inv, (b * g - a * h) * inv, (a * e - b * d) * inv}}};
}

inline const Mat3& lms_to_rgb_matrix() {
  static const Mat3 m = mat_inverse(kRgbToLms);
  return m;
}

inline const Mat3& lab_to_lms_matrix() {
  static const Mat3 m = mat_inverse(kLmsToLab);
  return m;
}

// Forward conversion of one pixel ([0,255] working units) into the
// decorrelated space; LMS components are floored at kLogFloor before log10.
inline Vec3 rgb_to_decorrelated(const Vec3& rgb) {
  Vec3 lms = mat_mul(kRgbToLms, rgb);
  for (double& v : lms) v = std::log10(std::max(v, kLogFloor));
  return mat_mul(kLmsToLab, lms);
}

inline Vec3 decorrelated_to_rgb(const Vec3& lab) {
  Vec3 log_lms = mat_mul(lab_to_lms_matrix(), lab);
  for (double& v : log_lms) v = std::pow(10.0, v);
  return mat_mul(lms_to_rgb_matrix(), log_lms);
}

// ---------------------------------------------------------------------------
// Statistics and transfer

// Per-channel mean and population standard deviation, in the transfer space.
struct ChannelStats {
  Vec3 mean{};
  Vec3 stddev{};
};

struct Region {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
};

inline ChannelStats patch_stats(const ImageBuffer& image, const Region& region, TransferSpace space) {
  if (region.width <= 0 || region.height <= 0)
    throw Error(Errc::empty_region, "patch region is empty");
  if (region.x0 < 0 || region.y0 < 0 || region.x0 + region.width > image.width ||
      region.y0 + region.height > image.height)
    throw Error(Errc::region_out_of_bounds, "patch region exceeds image bounds");

  Vec3 sum{}, sum_sq{};
  for (int y = region.y0; y < region.y0 + region.height; ++y)
    for (int x = region.x0; x < region.x0 + region.width; ++x) {
      Vec3 v = {static_cast<double>(image.at(0, y, x)), static_cast<double>(image.at(1, y, x)),
                static_cast<double>(image.at(2, y, x))};
      if (space == TransferSpace::decorrelated) v = rgb_to_decorrelated(v);
      for (int c = 0; c < 3; ++c) {
        sum[static_cast<std::size_t>(c)] += v[static_cast<std::size_t>(c)];
        sum_sq[static_cast<std::size_t>(c)] += v[static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(c)];
      }
    }

  const double count = static_cast<double>(region.width) * region.height;
  ChannelStats stats;
  for (int c = 0; c < 3; ++c) {
    const std::size_t i = static_cast<std::size_t>(c);
    stats.mean[i] = sum[i] / count;
    const double var = std::max(0.0, sum_sq[i] / count - stats.mean[i] * stats.mean[i]);
    stats.stddev[i] = std::sqrt(var);
  }
  return stats;
}

// out = (in - src_mean) * ref_std / max(src_std, eps) + ref_mean, per channel
// in the requested space; converted back and clamped to [0,255].
inline ImageBuffer color_transfer(const ImageBuffer& image, const ChannelStats& src_stats,
                                  const ChannelStats& ref_stats, TransferSpace space) {
  Vec3 scale, offset;
  for (int c = 0; c < 3; ++c) {
    const std::size_t i = static_cast<std::size_t>(c);
    scale[i] = ref_stats.stddev[i] / std::max(src_stats.stddev[i], kStdEps);
    offset[i] = ref_stats.mean[i];
  }

  ImageBuffer out(image.width, image.height);
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      Vec3 v = {static_cast<double>(image.at(0, y, x)), static_cast<double>(image.at(1, y, x)),
                static_cast<double>(image.at(2, y, x))};
      if (space == TransferSpace::decorrelated) v = rgb_to_decorrelated(v);
      for (int c = 0; c < 3; ++c) {
        const std::size_t i = static_cast<std::size_t>(c);
        v[i] = (v[i] - src_stats.mean[i]) * scale[i] + offset[i];
      }
      if (space == TransferSpace::decorrelated) v = decorrelated_to_rgb(v);
      for (int c = 0; c < 3; ++c) out.at(c, y, x) = quantize_u8(v[static_cast<std::size_t>(c)]);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Reference plan and rig-level transfer

// Maps each non-root camera to its reference. Must form acyclic chains over
// ring-adjacent pairs (overlap patches are only defined between neighbors).
struct ReferencePlan {
  std::vector<std::pair<std::string, std::string>> edges;  // source -> reference

  // Chain rooted at the second camera of the ring; for the canonical
  // left/front/right/rear order this is: left<-front, right<-front,
  // rear<-right.
  static ReferencePlan chain_default(const RigConfig& rig) {
    ReferencePlan plan;
    const int n = rig.size();
    plan.edges.emplace_back(rig.cameras[0].id, rig.cameras[1].id);
    for (int i = 2; i < n; ++i)
      plan.edges.emplace_back(rig.cameras[static_cast<std::size_t>(i)].id,
                              rig.cameras[static_cast<std::size_t>(i - 1)].id);
    return plan;
  }
};

// Processes cameras in plan dependency order; each source's statistics come
// from its overlap patch with its reference (both patches, on the current
// images, so chains observe already-transferred references). Roots pass
// through unchanged.
inline HarmonizedRig run_gct_rig(const RigConfig& rig, const ReferencePlan& plan, TransferSpace space) {
  if (const ValidationResult r = validate_rig(rig); !r.ok())
    throw Error(r.code, r.field + ": " + r.message);

  const int n = rig.size();
  std::map<std::string, int> index;
  for (int i = 0; i < n; ++i) index[rig.cameras[static_cast<std::size_t>(i)].id] = i;

  std::map<int, int> ref_of;  // source index -> reference index
  for (const auto& [src, ref] : plan.edges) {
    const auto si = index.find(src);
    const auto ri = index.find(ref);
    if (si == index.end() || ri == index.end())
      throw Error(Errc::validation_error, "plan names unknown camera '" + (si == index.end() ? src : ref) + "'");
    if (ref_of.count(si->second))
      throw Error(Errc::validation_error, "camera '" + src + "' has more than one reference");
    if (si->second == ri->second)
      throw Error(Errc::cyclic_plan, "camera '" + src + "' references itself");
    if (ri->second != rig.left_neighbor(si->second) && ri->second != rig.right_neighbor(si->second))
      throw Error(Errc::validation_error,
                  "plan edge " + src + "<-" + ref + " is not ring-adjacent; overlap patches are undefined");
    ref_of[si->second] = ri->second;
  }

  // Cycle check: every chain must reach a root within n hops.
  for (const auto& [src, ref] : ref_of) {
    int cur = src, hops = 0;
    while (ref_of.count(cur)) {
      cur = ref_of.at(cur);
      if (++hops > n) throw Error(Errc::cyclic_plan, "reference plan contains a cycle");
    }
    (void)ref;
  }

  std::vector<ImageBuffer> images;
  images.reserve(static_cast<std::size_t>(n));
  for (const CameraFrame& f : rig.cameras) images.push_back(f.image);

  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i)
    if (!ref_of.count(i)) done[static_cast<std::size_t>(i)] = true;  // roots

  int remaining = n - static_cast<int>(std::count(done.begin(), done.end(), true));
  while (remaining > 0) {
    bool progressed = false;
    for (int i = 0; i < n; ++i) {
      if (done[static_cast<std::size_t>(i)] || !done[static_cast<std::size_t>(ref_of.at(i))]) continue;
      const int ref = ref_of.at(i);
      const int h = rig.cameras[0].image.height;
      Region src_patch, ref_patch;
      if (ref == rig.right_neighbor(i)) {
        const int k = rig.pair_overlap(i);
        src_patch = {rig.cameras[0].image.width - k, 0, k, h};
        ref_patch = {0, 0, k, h};
      } else {
        const int k = rig.pair_overlap(ref);
        src_patch = {0, 0, k, h};
        ref_patch = {rig.cameras[0].image.width - k, 0, k, h};
      }
      const ChannelStats src_stats = patch_stats(images[static_cast<std::size_t>(i)], src_patch, space);
      const ChannelStats ref_stats = patch_stats(images[static_cast<std::size_t>(ref)], ref_patch, space);
      images[static_cast<std::size_t>(i)] = color_transfer(images[static_cast<std::size_t>(i)], src_stats, ref_stats, space);
      done[static_cast<std::size_t>(i)] = true;
      --remaining;
      progressed = true;
    }
    if (!progressed) throw Error(Errc::cyclic_plan, "reference plan contains a cycle");
  }

  HarmonizedRig result;
  for (int i = 0; i < n; ++i) {
    CameraFrame frame = rig.cameras[static_cast<std::size_t>(i)];
    frame.image = std::move(images[static_cast<std::size_t>(i)]);
    result.frames.push_back(std::move(frame));
  }
  return result;
}

}  // namespace mch
