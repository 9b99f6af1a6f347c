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
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types shared by the whole library. Types are plain value
// types, immutable by convention after construction; validation is a
// separate pure predicate so construction never throws.

namespace mch {

enum class Errc {
  none = 0,
  bad_dimensions,
  non_positive_awb_gain,
  non_monotone_lut,
  lut_entry_out_of_range,
  domain_error,
  dimension_mismatch,
  insufficient_cameras,
  empty_region,
  region_out_of_bounds,
  cyclic_plan,
  bad_spec,
  missing_file,
  schema_error,
  validation_error,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::none: return "None";
    case Errc::bad_dimensions: return "BadDimensions";
    case Errc::non_positive_awb_gain: return "NonPositiveAwbGain";
    case Errc::non_monotone_lut: return "NonMonotoneLut";
    case Errc::lut_entry_out_of_range: return "LutEntryOutOfRange";
    case Errc::domain_error: return "DomainError";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::insufficient_cameras: return "InsufficientCameras";
    case Errc::empty_region: return "EmptyRegion";
    case Errc::region_out_of_bounds: return "RegionOutOfBounds";
    case Errc::cyclic_plan: return "CyclicPlan";
    case Errc::bad_spec: return "BadSpec";
    case Errc::missing_file: return "MissingFile";
    case Errc::schema_error: return "SchemaError";
    case Errc::validation_error: return "ValidationError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Result of validate_frame / validate_rig. Reports the first violated
// invariant; `field` names the offending field.
struct ValidationResult {
  Errc code = Errc::none;
  std::string field;
  std::string message;

  bool ok() const noexcept { return code == Errc::none; }
  explicit operator bool() const noexcept { return ok(); }
};

// ---------------------------------------------------------------------------
// Rounding / storage

// All gain math runs in real arithmetic on [0,255]; rounding to 8-bit
// storage happens exactly once, at final output: round-half-up, then clamp.
inline double round_half_up(double v) { return std::floor(v + 0.5); }

inline std::uint8_t quantize_u8(double v) {
  const double r = round_half_up(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

// ---------------------------------------------------------------------------
// Images

// Planar 3-channel 8-bit raster: data[(c*height + y)*width + x],
// interpreted on the real-valued working domain [0,255].
struct ImageBuffer {
  int width = 0;
  int height = 0;
  static constexpr int channels = 3;
  std::vector<std::uint8_t> data;

  ImageBuffer() = default;
  ImageBuffer(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * channels, 0) {}

  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height + y) * width + x;
  }
  std::uint8_t& at(int c, int y, int x) { return data[index(c, y, x)]; }
  std::uint8_t at(int c, int y, int x) const { return data[index(c, y, x)]; }

  bool same_shape(const ImageBuffer& o) const {
    return width == o.width && height == o.height;
  }
};

// Real-valued working copy with the same planar layout. Intermediate gain
// stages may exceed [0,255]; clamping is deferred to final output.
struct WorkingImage {
  int width = 0;
  int height = 0;
  static constexpr int channels = 3;
  std::vector<double> data;

  WorkingImage() = default;
  WorkingImage(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * channels, 0.0) {}

  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height + y) * width + x;
  }
  double& at(int c, int y, int x) { return data[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data[index(c, y, x)]; }
};

inline WorkingImage to_working(const ImageBuffer& img) {
  WorkingImage w(img.width, img.height);
  std::copy(img.data.begin(), img.data.end(), w.data.begin());
  return w;
}

inline ImageBuffer quantize_image(const WorkingImage& w) {
  ImageBuffer out(w.width, w.height);
  for (std::size_t i = 0; i < w.data.size(); ++i) out.data[i] = quantize_u8(w.data[i]);
  return out;
}

// ---------------------------------------------------------------------------
// ISP metadata

// Per-channel white balance gain triple from ISP metadata; strictly positive.
struct AwbGains {
  double r = 1.0;
  double g = 1.0;
  double b = 1.0;

  double operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
  double& operator[](int c) { return c == 0 ? r : (c == 1 ? g : b); }
};

// 256-entry monotone (non-strict) tone mapping table shared by R,G,B.
// Entries are real-valued on [0,255]; plateaus are legal.
struct GtmLut {
  std::array<double, 256> entries{};

  static GtmLut identity() {
    GtmLut l;
    for (int i = 0; i < 256; ++i) l.entries[i] = static_cast<double>(i);
    return l;
  }

  double operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return entries[static_cast<std::size_t>(i)]; }

  // Evaluate at a real index with linear interpolation; indices above 255
  // extrapolate the last segment slope, negatives evaluate entry 0.
  double eval(double v) const {
    if (v <= 0.0) return entries[0];
    if (v >= 255.0) return entries[255] + (entries[255] - entries[254]) * (v - 255.0);
    const int i = static_cast<int>(v);
    const double t = v - i;
    return entries[i] + (entries[i + 1] - entries[i]) * t;
  }
};

struct CameraFrame {
  std::string id;
  ImageBuffer image;
  AwbGains awb;
  GtmLut gtm;
};

// Ordered ring of cameras: camera i's right edge abuts camera i+1's left
// edge, wrapping. overlap_cols[i] is the column count of overlapping content
// between camera i and camera (i+1) % n, used by metrics and the baseline.
struct RigConfig {
  std::vector<CameraFrame> cameras;
  std::vector<int> overlap_cols;

  int size() const { return static_cast<int>(cameras.size()); }
  int left_neighbor(int i) const { return (i + size() - 1) % size(); }
  int right_neighbor(int i) const { return (i + 1) % size(); }
  int pair_overlap(int pair_index) const { return overlap_cols[static_cast<std::size_t>(pair_index)]; }
};

enum class GtmMode { compose, literal_average };

struct HarmonizeConfig {
  bool enable_awb = true;
  bool enable_gtm = true;
  GtmMode gtm_mode = GtmMode::compose;
  bool clamp_output = true;
};

// ---------------------------------------------------------------------------
// Validation

// Pure predicate over a single frame; accepts iff all type invariants hold,
// otherwise reports the first violated one.
inline ValidationResult validate_frame(const CameraFrame& frame) {
  const ImageBuffer& img = frame.image;
  if (img.width < 2)
    return {Errc::bad_dimensions, "image.width", "width must be >= 2, got " + std::to_string(img.width)};
  if (img.width % 2 != 0)
    return {Errc::bad_dimensions, "image.width", "width must be even, got " + std::to_string(img.width)};
  if (img.height < 1)
    return {Errc::bad_dimensions, "image.height", "height must be >= 1, got " + std::to_string(img.height)};
  const std::size_t expect = static_cast<std::size_t>(img.width) * img.height * ImageBuffer::channels;
  if (img.data.size() != expect)
    return {Errc::bad_dimensions, "image.data",
            "data length " + std::to_string(img.data.size()) + " != width*height*3 = " + std::to_string(expect)};

  const char* names[3] = {"awb.r", "awb.g", "awb.b"};
  for (int c = 0; c < 3; ++c) {
    const double v = frame.awb[c];
    if (!(v > 0.0) || !std::isfinite(v))
      return {Errc::non_positive_awb_gain, names[c], "gain must be strictly positive, got " + std::to_string(v)};
  }

  for (int i = 0; i < 256; ++i) {
    const double e = frame.gtm[i];
    if (!(e >= 0.0 && e <= 255.0) || !std::isfinite(e))
      return {Errc::lut_entry_out_of_range, "gtm[" + std::to_string(i) + "]",
              "entry must lie in [0,255], got " + std::to_string(e)};
    if (i > 0 && e < frame.gtm[i - 1])
      return {Errc::non_monotone_lut, "gtm[" + std::to_string(i) + "]",
              "entry " + std::to_string(e) + " < gtm[" + std::to_string(i - 1) + "] = " +
                  std::to_string(frame.gtm[i - 1])};
  }
  return {};
}

inline ValidationResult validate_rig(const RigConfig& rig) {
  if (rig.size() < 2)
    return {Errc::insufficient_cameras, "cameras", "a rig needs >= 2 cameras, got " + std::to_string(rig.size())};
  for (int i = 0; i < rig.size(); ++i) {
    ValidationResult r = validate_frame(rig.cameras[static_cast<std::size_t>(i)]);
    if (!r.ok()) {
      r.field = rig.cameras[static_cast<std::size_t>(i)].id + "." + r.field;
      return r;
    }
    for (int j = 0; j < i; ++j)
      if (rig.cameras[static_cast<std::size_t>(j)].id == rig.cameras[static_cast<std::size_t>(i)].id)
        return {Errc::validation_error, "cameras[" + std::to_string(i) + "].id",
                "duplicate camera id '" + rig.cameras[static_cast<std::size_t>(i)].id + "'"};
    if (!rig.cameras[static_cast<std::size_t>(i)].image.same_shape(rig.cameras[0].image))
      return {Errc::bad_dimensions, rig.cameras[static_cast<std::size_t>(i)].id + ".image",
              "all cameras must share identical width and height"};
  }
  if (rig.overlap_cols.size() != static_cast<std::size_t>(rig.size()))
    return {Errc::validation_error, "overlap_cols",
            "need one overlap per adjacent pair (" + std::to_string(rig.size()) + "), got " +
                std::to_string(rig.overlap_cols.size())};
  const int w = rig.cameras[0].image.width;
  for (std::size_t p = 0; p < rig.overlap_cols.size(); ++p) {
    const int k = rig.overlap_cols[p];
    if (k < 1 || k >= w / 2)
      return {Errc::validation_error, "overlap_cols[" + std::to_string(p) + "]",
              "overlap must satisfy 1 <= k < width/2, got " + std::to_string(k)};
  }
  return {};
}

}  // namespace mch
