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

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mch/image_codec.hpp"
#include "mch/metrics.hpp"
#include "mch/pipeline.hpp"
#include "mch/synth.hpp"
#include "mch/types.hpp"

// On-disk rig layout and the metadata schema.
//
// A rig directory contains:
//   rig.manifest        ring order and per-pair overlap widths
//   <camera>.png|.ppm   one image per camera
//   <camera>.meta       one metadata file per camera
//
// Text files are "key: value" lines; lines without a colon continue the
// previous key, '#' starts a comment. Unknown keys are rejected. Floats are
// written in shortest-round-trip form, so serialize -> parse is exact.

namespace mch {

inline constexpr const char* kMetadataSchema = "mch-camera-metadata/1";
inline constexpr const char* kManifestSchema = "mch-rig-manifest/1";
inline constexpr const char* kSceneSpecSchema = "mch-scene-spec/1";
inline constexpr const char* kManifestName = "rig.manifest";
inline constexpr const char* kGainReportName = "gain_report.txt";

// ---------------------------------------------------------------------------
// key/value text scaffolding

namespace kv {

struct Entry {
  std::string key;
  std::string value;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<Entry> parse(const std::string& text, const std::string& context) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos) {
      if (entries.empty())
        throw Error(Errc::schema_error, context + ": continuation line before any key: '" + t + "'");
      entries.back().value += " " + t;
    } else {
      entries.push_back({trim(t.substr(0, colon)), trim(t.substr(colon + 1))});
    }
  }
  return entries;
}

inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline double to_double(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw Error(Errc::schema_error, context + ": not a number: '" + s + "'");
  return v;
}

inline long long to_int(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw Error(Errc::schema_error, context + ": not an integer: '" + s + "'");
  return v;
}

// Shortest representation that parses back to the same double.
inline std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace kv

// ---------------------------------------------------------------------------
// Camera metadata

struct MetadataRecord {
  std::string camera;
  AwbGains awb;
  GtmLut gtm;
  int version = 1;
};

inline std::string serialize_metadata(const MetadataRecord& rec) {
  std::ostringstream out;
  out << "schema: " << kMetadataSchema << "\n";
  out << "camera: " << rec.camera << "\n";
  out << "awb: " << kv::fmt(rec.awb.r) << " " << kv::fmt(rec.awb.g) << " " << kv::fmt(rec.awb.b) << "\n";
  out << "gtm:\n";
  for (int row = 0; row < 16; ++row) {
    out << " ";
    for (int col = 0; col < 16; ++col) out << " " << kv::fmt(rec.gtm[row * 16 + col]);
    out << "\n";
  }
  return out.str();
}

inline MetadataRecord parse_metadata(const std::string& text, const std::string& context) {
  MetadataRecord rec;
  bool saw_schema = false, saw_camera = false, saw_awb = false, saw_gtm = false;
  for (const kv::Entry& e : kv::parse(text, context)) {
    if (e.key == "schema") {
      if (e.value != kMetadataSchema)
        throw Error(Errc::schema_error, context + ": unsupported schema '" + e.value + "', expected " + kMetadataSchema);
      saw_schema = true;
    } else if (e.key == "camera") {
      if (e.value.empty()) throw Error(Errc::schema_error, context + ": empty camera id");
      rec.camera = e.value;
      saw_camera = true;
    } else if (e.key == "awb") {
      const auto toks = kv::tokens(e.value);
      if (toks.size() != 3)
        throw Error(Errc::schema_error, context + ": awb needs 3 values, got " + std::to_string(toks.size()));
      for (int c = 0; c < 3; ++c) rec.awb[c] = kv::to_double(toks[static_cast<std::size_t>(c)], context);
      saw_awb = true;
    } else if (e.key == "gtm") {
      const auto toks = kv::tokens(e.value);
      if (toks.size() != 256)
        throw Error(Errc::schema_error,
                    context + ": gtm needs exactly 256 entries, got " + std::to_string(toks.size()));
      for (int i = 0; i < 256; ++i) rec.gtm[i] = kv::to_double(toks[static_cast<std::size_t>(i)], context);
      saw_gtm = true;
    } else {
      throw Error(Errc::schema_error, context + ": unknown field '" + e.key + "'");
    }
  }
  if (!saw_schema) throw Error(Errc::schema_error, context + ": missing 'schema' field");
  if (!saw_camera) throw Error(Errc::schema_error, context + ": missing 'camera' field");
  if (!saw_awb) throw Error(Errc::schema_error, context + ": missing 'awb' field");
  if (!saw_gtm) throw Error(Errc::schema_error, context + ": missing 'gtm' field");
  return rec;
}

// ---------------------------------------------------------------------------
// Rig directories

namespace rig_detail {

inline std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace rig_detail

inline std::string serialize_manifest(const RigConfig& rig) {
  std::ostringstream out;
  out << "schema: " << kManifestSchema << "\n";
  out << "cameras:";
  for (const CameraFrame& f : rig.cameras) out << " " << f.id;
  out << "\n";
  const bool uniform = std::all_of(rig.overlap_cols.begin(), rig.overlap_cols.end(),
                                   [&](int k) { return k == rig.overlap_cols[0]; });
  out << "overlap_cols:";
  if (uniform) {
    out << " " << rig.overlap_cols[0];
  } else {
    for (int k : rig.overlap_cols) out << " " << k;
  }
  out << "\n";
  return out.str();
}

// Fully validated rig from a directory; violations are reported with file
// and field.
inline RigConfig read_rig(const std::filesystem::path& dir) {
  const std::filesystem::path manifest_path = dir / kManifestName;
  if (!std::filesystem::exists(manifest_path))
    throw Error(Errc::missing_file, "no manifest '" + manifest_path.string() + "'");

  std::vector<std::string> ids;
  std::vector<int> overlaps;
  bool saw_schema = false;
  for (const kv::Entry& e : kv::parse(rig_detail::read_text(manifest_path), manifest_path.string())) {
    if (e.key == "schema") {
      if (e.value != kManifestSchema)
        throw Error(Errc::schema_error, manifest_path.string() + ": unsupported schema '" + e.value + "'");
      saw_schema = true;
    } else if (e.key == "cameras") {
      ids = kv::tokens(e.value);
    } else if (e.key == "overlap_cols") {
      for (const std::string& t : kv::tokens(e.value))
        overlaps.push_back(static_cast<int>(kv::to_int(t, manifest_path.string())));
    } else {
      throw Error(Errc::schema_error, manifest_path.string() + ": unknown field '" + e.key + "'");
    }
  }
  if (!saw_schema) throw Error(Errc::schema_error, manifest_path.string() + ": missing 'schema' field");
  if (ids.empty()) throw Error(Errc::schema_error, manifest_path.string() + ": missing or empty 'cameras'");
  if (overlaps.empty()) throw Error(Errc::schema_error, manifest_path.string() + ": missing 'overlap_cols'");
  if (overlaps.size() == 1) overlaps.assign(ids.size(), overlaps[0]);
  if (overlaps.size() != ids.size())
    throw Error(Errc::schema_error, manifest_path.string() + ": overlap_cols needs 1 value or one per pair (" +
                                        std::to_string(ids.size()) + "), got " + std::to_string(overlaps.size()));

  RigConfig rig;
  rig.overlap_cols = overlaps;
  for (const std::string& id : ids) {
    CameraFrame frame;
    frame.id = id;
    const std::filesystem::path png = dir / (id + ".png");
    const std::filesystem::path ppm = dir / (id + ".ppm");
    if (std::filesystem::exists(png))
      frame.image = read_image(png);
    else if (std::filesystem::exists(ppm))
      frame.image = read_image(ppm);
    else
      throw Error(Errc::missing_file, "no image for camera '" + id + "' in " + dir.string());

    const std::filesystem::path meta = dir / (id + ".meta");
    if (!std::filesystem::exists(meta))
      throw Error(Errc::missing_file, "no metadata for camera '" + id + "' in " + dir.string());
    const MetadataRecord rec = parse_metadata(rig_detail::read_text(meta), meta.string());
    if (rec.camera != id)
      throw Error(Errc::missing_file, meta.string() + ": metadata is for camera '" + rec.camera +
                                          "', expected '" + id + "'");
    frame.awb = rec.awb;
    frame.gtm = rec.gtm;
    rig.cameras.push_back(std::move(frame));
  }

  if (const ValidationResult r = validate_rig(rig); !r.ok())
    throw Error(r.code, dir.string() + ": " + r.field + ": " + r.message);
  return rig;
}

inline void write_rig(const RigConfig& rig, const std::filesystem::path& dir,
                      ImageFormat format = ImageFormat::png) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create '" + dir.string() + "': " + ec.message());

  for (const CameraFrame& f : rig.cameras) {
    const char* ext = format == ImageFormat::png ? ".png" : ".ppm";
    write_image(dir / (f.id + ext), f.image);
    MetadataRecord rec{f.id, f.awb, f.gtm, 1};
    rig_detail::write_text(dir / (f.id + ".meta"), serialize_metadata(rec));
  }
  rig_detail::write_text(dir / kManifestName, serialize_manifest(rig));
}

inline std::string serialize_gain_report(const std::vector<CameraGainReport>& reports) {
  std::ostringstream out;
  out << "schema: mch-gain-report/1\n";
  for (const CameraGainReport& rep : reports) {
    out << "camera: " << rep.camera << "\n";
    const SideGainReport* sides[2] = {&rep.left, &rep.right};
    const char* names[2] = {"left", "right"};
    for (int s = 0; s < 2; ++s) {
      const SideGainReport& r = *sides[s];
      out << "  # " << names[s] << " half\n";
      out << "  " << names[s] << ".awb: " << kv::fmt(r.awb.r) << " " << kv::fmt(r.awb.g) << " "
          << kv::fmt(r.awb.b) << "\n";
      out << "  " << names[s] << ".corr_at_0_64_128_192_255:";
      for (double v : r.corr_samples) out << " " << kv::fmt(v);
      out << "\n  " << names[s] << ".corr_max_abs_dev: " << kv::fmt(r.corr_max_abs_dev) << "\n";
      out << "  " << names[s] << ".weights:";
      for (const auto& [col, w] : r.sampled_weights) out << " " << col << ":" << kv::fmt(w);
      out << "\n";
    }
  }
  return out.str();
}

// Harmonized output keeps the source metadata (the images changed, the ISP
// parameters that produced the sources did not), so the directory reads back
// as a rig; the per-pair gain report rides along for inspection.
inline void write_harmonized(const HarmonizedRig& h, const std::vector<int>& overlap_cols,
                             const std::filesystem::path& dir, ImageFormat format = ImageFormat::png) {
  RigConfig out;
  out.cameras = h.frames;
  out.overlap_cols = overlap_cols;
  write_rig(out, dir, format);
  if (!h.report.empty()) rig_detail::write_text(dir / kGainReportName, serialize_gain_report(h.report));
}

// ---------------------------------------------------------------------------
// Scene spec files (declarative input for `synth`)

inline DistortKind parse_distort_kind(const std::string& s, const std::string& context) {
  if (s == "none") return DistortKind::none;
  if (s == "awb") return DistortKind::awb_only;
  if (s == "gtm") return DistortKind::gtm_only;
  if (s == "both") return DistortKind::both;
  throw Error(Errc::schema_error, context + ": unknown distort kind '" + s + "' (none|awb|gtm|both)");
}

inline SceneContent parse_scene_content(const std::string& s, const std::string& context) {
  if (s == "gradient") return SceneContent::gradient;
  if (s == "textured-noise") return SceneContent::textured_noise;
  if (s == "object-disparity") return SceneContent::object_disparity;
  throw Error(Errc::schema_error,
              context + ": unknown content '" + s + "' (gradient|textured-noise|object-disparity)");
}

// Parse a declarative scene spec. Per-camera overrides (awb.N, gamma.N,
// shoulder.N) replace the seeded draw for that camera.
inline SceneSpec parse_scene_spec(const std::string& text, const std::string& context) {
  std::uint64_t seed = 1;
  int cameras = 4, width = 512, height = 256, overlap = 0;
  SceneContent content = SceneContent::textured_noise;
  DistortKind kind = DistortKind::both;
  double lo = -1.0, hi = -1.0;
  struct Override {
    bool has_awb = false;
    AwbGains awb;
    bool has_gamma = false;
    double gamma = 1.0, shoulder = 0.0;
  };
  std::map<int, Override> overrides;
  bool saw_schema = false;

  auto camera_suffix = [&](const std::string& key, const std::string& prefix) -> int {
    return static_cast<int>(kv::to_int(key.substr(prefix.size()), context));
  };

  for (const kv::Entry& e : kv::parse(text, context)) {
    if (e.key == "schema") {
      if (e.value != kSceneSpecSchema)
        throw Error(Errc::schema_error, context + ": unsupported schema '" + e.value + "'");
      saw_schema = true;
    } else if (e.key == "seed") {
      seed = static_cast<std::uint64_t>(kv::to_int(e.value, context));
    } else if (e.key == "cameras") {
      cameras = static_cast<int>(kv::to_int(e.value, context));
    } else if (e.key == "width") {
      width = static_cast<int>(kv::to_int(e.value, context));
    } else if (e.key == "height") {
      height = static_cast<int>(kv::to_int(e.value, context));
    } else if (e.key == "overlap_cols") {
      overlap = static_cast<int>(kv::to_int(e.value, context));
    } else if (e.key == "content") {
      content = parse_scene_content(e.value, context);
    } else if (e.key == "distort") {
      kind = parse_distort_kind(e.value, context);
    } else if (e.key == "content_lo") {
      lo = kv::to_double(e.value, context);
    } else if (e.key == "content_hi") {
      hi = kv::to_double(e.value, context);
    } else if (e.key.rfind("awb.", 0) == 0) {
      const auto toks = kv::tokens(e.value);
      if (toks.size() != 3) throw Error(Errc::schema_error, context + ": " + e.key + " needs 3 values");
      Override& o = overrides[camera_suffix(e.key, "awb.")];
      for (int c = 0; c < 3; ++c) o.awb[c] = kv::to_double(toks[static_cast<std::size_t>(c)], context);
      o.has_awb = true;
    } else if (e.key.rfind("gamma.", 0) == 0) {
      Override& o = overrides[camera_suffix(e.key, "gamma.")];
      o.gamma = kv::to_double(e.value, context);
      o.has_gamma = true;
    } else if (e.key.rfind("shoulder.", 0) == 0) {
      Override& o = overrides[camera_suffix(e.key, "shoulder.")];
      o.shoulder = kv::to_double(e.value, context);
      o.has_gamma = true;
    } else {
      throw Error(Errc::schema_error, context + ": unknown field '" + e.key + "'");
    }
  }
  if (!saw_schema) throw Error(Errc::schema_error, context + ": missing 'schema' field");

  SceneSpec spec = make_scene_spec(seed, cameras, width, height, overlap, content, kind);
  if (lo >= 0.0) spec.content_lo = lo;
  if (hi >= 0.0) spec.content_hi = hi;
  for (const auto& [idx, o] : overrides) {
    if (idx < 0 || idx >= cameras)
      throw Error(Errc::schema_error, context + ": override index " + std::to_string(idx) + " out of range");
    if (o.has_awb) spec.distortions[static_cast<std::size_t>(idx)].awb = o.awb;
    if (o.has_gamma) spec.distortions[static_cast<std::size_t>(idx)].gtm = make_gamma_lut(o.gamma, o.shoulder);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Seam report text and the comparison strip

inline std::string serialize_seam_report(const SeamReport& report) {
  std::ostringstream out;
  out << "schema: mch-seam-report/1\n";
  for (const PairSeam& p : report.pairs) {
    out << "pair " << p.camera_a << "/" << p.camera_b << ": pre " << kv::fmt(p.pre) << " post "
        << kv::fmt(p.post);
    if (p.pre > 0.0)
      out << " reduction " << kv::fmt(p.reduction * 100.0) << "%";
    else
      out << " reduction n/a";
    out << "\n";
  }
  for (const CameraGainStep& s : report.gain_steps)
    out << "camera " << s.camera << ": max_gain_step " << kv::fmt(s.max_step) << "\n";
  return out.str();
}

// Cameras side by side in ring order with a 1-pixel magenta marker at each
// seam column.
inline ImageBuffer compose_strip(const std::vector<ImageBuffer>& frames) {
  if (frames.empty()) throw Error(Errc::insufficient_cameras, "strip needs at least one frame");
  const int w = frames[0].width, h = frames[0].height;
  for (const ImageBuffer& f : frames)
    if (f.width != w || f.height != h)
      throw Error(Errc::dimension_mismatch, "strip frames must share dimensions");

  ImageBuffer out(w * static_cast<int>(frames.size()), h);
  for (std::size_t i = 0; i < frames.size(); ++i)
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(c, y, static_cast<int>(i) * w + x) = frames[i].at(c, y, x);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const int x = static_cast<int>(i) * w;
    for (int y = 0; y < h; ++y) {
      out.at(0, y, x) = 255;
      out.at(1, y, x) = 0;
      out.at(2, y, x) = 255;
    }
  }
  return out;
}

}  // namespace mch
