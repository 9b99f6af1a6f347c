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
#include <cstdint>
#include <string>
#include <vector>

#include "mch/types.hpp"

// Deterministic synthetic rigs with analytically known ground truth: a
// shared panorama is cut into overlapping per-camera windows, then each
// camera's AWB gains and GTM LUT are applied to its window and attached as
// that camera's metadata. Same spec -> bit-identical rig, on any platform
// (integer hashing plus IEEE double arithmetic only; see README for the
// fixed noise constants).

namespace mch {

// ---------------------------------------------------------------------------
// Deterministic RNG / value noise

// splitmix64; the only RNG used for synthesis (std:: distributions are not
// bit-portable across standard libraries).
struct SplitMix {
  std::uint64_t state;

  explicit SplitMix(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

namespace noise {

inline double lattice_unit(std::uint64_t seed, std::int64_t xi, std::int64_t yi, std::uint64_t salt) {
  SplitMix mix(seed + static_cast<std::uint64_t>(xi) * 0xC2B2AE3D27D4EB4Full +
               static_cast<std::uint64_t>(yi) * 0xD6E8FEB86659FD93ull + salt * 0xA0761D6478BD642Full);
  return mix.unit();
}

inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Bilinear value noise: base cell 32 px, 3 octaves, lacunarity 2,
// persistence 0.5. Returns a value in [0,1).
inline double value_noise(std::uint64_t seed, double x, double y, std::uint64_t salt) {
  double sum = 0.0, amplitude = 1.0, total = 0.0, cell = 32.0;
  for (int octave = 0; octave < 3; ++octave) {
    const double fx = x / cell, fy = y / cell;
    const std::int64_t ix = static_cast<std::int64_t>(std::floor(fx));
    const std::int64_t iy = static_cast<std::int64_t>(std::floor(fy));
    const double tx = smoothstep(fx - static_cast<double>(ix));
    const double ty = smoothstep(fy - static_cast<double>(iy));
    const std::uint64_t s = salt * 8 + static_cast<std::uint64_t>(octave);
    const double v00 = lattice_unit(seed, ix, iy, s);
    const double v10 = lattice_unit(seed, ix + 1, iy, s);
    const double v01 = lattice_unit(seed, ix, iy + 1, s);
    const double v11 = lattice_unit(seed, ix + 1, iy + 1, s);
    const double top = v00 + (v10 - v00) * tx;
    const double bottom = v01 + (v11 - v01) * tx;
    sum += (top + (bottom - top) * ty) * amplitude;
    total += amplitude;
    amplitude *= 0.5;
    cell *= 0.5;
  }
  return sum / total;
}

}  // namespace noise

// ---------------------------------------------------------------------------
// Scene specification

enum class SceneContent { gradient, textured_noise, object_disparity };

enum class DistortKind { none, awb_only, gtm_only, both };

struct CameraDistortion {
  AwbGains awb;
  GtmLut gtm = GtmLut::identity();
};

// Distortion draw ranges. Defaults keep the synthesis free of clipping
// (max gain x max content <= 255) so the analytic ground truth stays exact.
struct DistortionRanges {
  double awb_lo = 0.9, awb_hi = 1.15;
  double gamma_lo = 0.5, gamma_hi = 2.0;
  double shoulder_max = 0.0;  // 0 disables the highlight shoulder term
  // Bias even/odd cameras toward opposite ends of each range so adjacent
  // pairs always carry a visible metadata gap; a guard band around the
  // midpoint keeps the gap from collapsing to zero.
  bool alternate = false;
  double alternate_guard = 0.15;  // fraction of each half-range kept clear
};

struct SceneSpec {
  std::uint64_t seed = 1;
  int cameras = 4;
  int width = 512;
  int height = 256;
  int overlap_cols = 0;  // 0 -> width/8
  SceneContent content = SceneContent::textured_noise;
  std::vector<CameraDistortion> distortions;  // one per camera
  double content_lo = 40.0;
  double content_hi = 200.0;

  int resolved_overlap() const { return overlap_cols > 0 ? overlap_cols : width / 8; }
};

// Monotone parametric tone curve: lut(v) = 255 * g((v/255)^gamma) with the
// optional shoulder g(f) = (1+s)f / (1+sf), tabulated at 256 points.
inline GtmLut make_gamma_lut(double gamma, double shoulder = 0.0) {
  GtmLut lut;
  for (int v = 0; v < 256; ++v) {
    const double u = static_cast<double>(v) / 255.0;
    double f = std::pow(u, gamma);
    if (shoulder > 0.0) f = (1.0 + shoulder) * f / (1.0 + shoulder * f);
    lut[v] = 255.0 * f;
  }
  return lut;
}

inline CameraDistortion draw_distortion(SplitMix& rng, DistortKind kind, const DistortionRanges& ranges,
                                        int camera_index) {
  CameraDistortion d;
  double awb_lo = ranges.awb_lo, awb_hi = ranges.awb_hi;
  double gamma_lo = ranges.gamma_lo, gamma_hi = ranges.gamma_hi;
  if (ranges.alternate) {
    const double awb_mid = (ranges.awb_lo + ranges.awb_hi) / 2.0;
    const double gamma_mid = (ranges.gamma_lo + ranges.gamma_hi) / 2.0;
    const double awb_guard = ranges.alternate_guard * (ranges.awb_hi - ranges.awb_lo) / 2.0;
    const double gamma_guard = ranges.alternate_guard * (ranges.gamma_hi - ranges.gamma_lo) / 2.0;
    if (camera_index % 2 == 0) {
      // Dark side: low gains and a darkening tone curve, so the two
      // distortions compound instead of cancelling.
      awb_hi = awb_mid - awb_guard;
      gamma_lo = gamma_mid + gamma_guard;
    } else {
      awb_lo = awb_mid + awb_guard;
      gamma_hi = gamma_mid - gamma_guard;
    }
  }
  if (kind == DistortKind::awb_only || kind == DistortKind::both)
    for (int c = 0; c < 3; ++c) d.awb[c] = rng.uniform(awb_lo, awb_hi);
  if (kind == DistortKind::gtm_only || kind == DistortKind::both) {
    const double gamma = rng.uniform(gamma_lo, gamma_hi);
    const double shoulder = ranges.shoulder_max > 0.0 ? rng.uniform(0.0, ranges.shoulder_max) : 0.0;
    d.gtm = make_gamma_lut(gamma, shoulder);
  }
  return d;
}

inline SceneSpec make_scene_spec(std::uint64_t seed, int cameras, int width, int height,
                                 int overlap_cols, SceneContent content, DistortKind kind,
                                 const DistortionRanges& ranges = {}) {
  SceneSpec spec;
  spec.seed = seed;
  spec.cameras = cameras;
  spec.width = width;
  spec.height = height;
  spec.overlap_cols = overlap_cols;
  spec.content = content;
  SplitMix rng(seed ^ 0x5EEDFACEull);
  for (int i = 0; i < cameras; ++i) spec.distortions.push_back(draw_distortion(rng, kind, ranges, i));
  return spec;
}

// ---------------------------------------------------------------------------
// Generation

inline ValidationResult validate_spec(const SceneSpec& spec) {
  if (spec.cameras < 2)
    return {Errc::bad_spec, "cameras", "need >= 2 cameras, got " + std::to_string(spec.cameras)};
  if (spec.width < 4 || spec.width % 2 != 0)
    return {Errc::bad_spec, "width", "need an even width >= 4, got " + std::to_string(spec.width)};
  if (spec.height < 1) return {Errc::bad_spec, "height", "need height >= 1"};
  const int k = spec.resolved_overlap();
  if (k < 1 || k >= spec.width / 2)
    return {Errc::bad_spec, "overlap_cols", "overlap must satisfy 1 <= k < width/2, got " + std::to_string(k)};
  if (!(spec.content_lo >= 0.0 && spec.content_lo < spec.content_hi && spec.content_hi <= 255.0))
    return {Errc::bad_spec, "content range", "need 0 <= lo < hi <= 255"};
  if (spec.distortions.size() != static_cast<std::size_t>(spec.cameras))
    return {Errc::bad_spec, "distortions", "need one distortion per camera"};
  for (std::size_t i = 0; i < spec.distortions.size(); ++i) {
    const CameraDistortion& d = spec.distortions[i];
    for (int c = 0; c < 3; ++c) {
      if (!(d.awb[c] > 0.0))
        return {Errc::bad_spec, "distortions[" + std::to_string(i) + "].awb", "gains must be positive"};
      if (d.awb[c] * spec.content_hi > 255.0 + 1e-9)
        return {Errc::bad_spec, "distortions[" + std::to_string(i) + "].awb",
                "gain x content_hi exceeds 255; synthesis would clip and lose the analytic oracle"};
    }
  }
  return {};
}

inline int panorama_width(const SceneSpec& spec) {
  return spec.cameras * (spec.width - spec.resolved_overlap());
}

// Shared pre-distortion content. The panorama wraps: camera i's window starts
// at column i*(W-k) and windows read modulo the panorama width, so the last
// camera's right overlap is the first camera's left overlap.
inline WorkingImage synth_panorama(const SceneSpec& spec) {
  if (const ValidationResult r = validate_spec(spec); !r.ok())
    throw Error(r.code, r.field + ": " + r.message);
  const int pw = panorama_width(spec);
  WorkingImage pano(pw, spec.height);
  const double lo = spec.content_lo, hi = spec.content_hi;

  if (spec.content == SceneContent::gradient) {
    // Vertical ramp, constant along x: every column carries identical
    // content, so a pair's two outer boundary columns see the same scene.
    SplitMix rng(spec.seed ^ 0x6E4D1E47ull);
    double offset[3];
    for (int c = 0; c < 3; ++c) offset[c] = rng.uniform(-0.15, 0.15);
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < spec.height; ++y) {
        const double t = spec.height > 1 ? static_cast<double>(y) / (spec.height - 1) : 0.0;
        const double v = lo + (hi - lo) * std::clamp(0.15 + 0.7 * t + offset[c], 0.0, 1.0);
        for (int x = 0; x < pw; ++x) pano.at(c, y, x) = v;
      }
  } else {
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < pw; ++x)
          pano.at(c, y, x) =
              lo + (hi - lo) * noise::value_noise(spec.seed, static_cast<double>(x), static_cast<double>(y),
                                                  static_cast<std::uint64_t>(c));
  }
  return pano;
}

namespace detail {

// In object-disparity mode each pair's overlap shows an object to the left
// camera only, as if parallax moved it out of the right camera's view.
inline void inject_disparity_object(WorkingImage& window, const SceneSpec& spec, int camera_index) {
  const int k = spec.resolved_overlap();
  const int rw = std::max(1, k / 2);
  const int rh = std::max(1, spec.height / 3);
  SplitMix rng(spec.seed ^ 0x0B7EC75ull ^ (static_cast<std::uint64_t>(camera_index) << 32));
  const int x0 = spec.width - k + std::max(0, k / 8);
  const int y0 = static_cast<int>(rng.uniform(0.0, static_cast<double>(std::max(1, spec.height - rh))));
  double color[3];
  for (int c = 0; c < 3; ++c) color[c] = rng.uniform(std::max(spec.content_lo, spec.content_hi - 40.0), spec.content_hi);
  for (int c = 0; c < 3; ++c)
    for (int y = y0; y < std::min(spec.height, y0 + rh); ++y)
      for (int x = x0; x < std::min(spec.width, x0 + rw); ++x) window.at(c, y, x) = color[c];
}

}  // namespace detail

// Build the rig: cut windows, distort (AWB multiplicatively, then the GTM
// LUT with linear interpolation), quantize once, attach exactly the applied
// parameters as metadata.
inline RigConfig generate_rig(const SceneSpec& spec) {
  const WorkingImage pano = synth_panorama(spec);  // validates the spec
  const int n = spec.cameras, w = spec.width, h = spec.height;
  const int k = spec.resolved_overlap();
  const int pw = pano.width;

  static const char* kRingNames[4] = {"left", "front", "right", "rear"};

  RigConfig rig;
  for (int i = 0; i < n; ++i) {
    const int start = i * (w - k);
    WorkingImage window(w, h);
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) window.at(c, y, x) = pano.at(c, y, (start + x) % pw);

    if (spec.content == SceneContent::object_disparity) detail::inject_disparity_object(window, spec, i);

    const CameraDistortion& d = spec.distortions[static_cast<std::size_t>(i)];
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) window.at(c, y, x) = d.gtm.eval(window.at(c, y, x) * d.awb[c]);

    CameraFrame frame;
    frame.id = n == 4 ? kRingNames[i] : "cam" + std::to_string(i);
    frame.image = quantize_image(window);
    frame.awb = d.awb;
    frame.gtm = d.gtm;
    rig.cameras.push_back(std::move(frame));
    rig.overlap_cols.push_back(k);
  }
  return rig;
}

}  // namespace mch
