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
#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "mch/gct.hpp"
#include "mch/pipeline.hpp"
#include "mch/types.hpp"

// Runtime comparison of the metadata path against the patch-based GCT path
// on the same rig. The GCT bill includes a projection-analogue remap (a
// bilinear per-pixel warp of equal pixel count standing in for the
// ground-projection step), the overlap patch statistics, and the transfer
// itself. Medians over repetitions; runs are sequential to keep timing clean.

namespace mch {

struct BenchLineItem {
  std::string name;
  double ms = 0.0;
};

struct BenchMethodResult {
  std::string method;
  std::vector<BenchLineItem> items;
  double total_ms = 0.0;
};

struct BenchResult {
  BenchMethodResult metadata;
  BenchMethodResult gct;
  double ratio = 0.0;  // metadata total / gct total
  int repetitions = 0;
};

namespace bench_detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Projection stand-in: bilinear resample of the whole frame through a mild
// fixed warp; same pixel count as the source.
inline void remap_frame(const ImageBuffer& src, WorkingImage& dst) {
  const int w = src.width, h = src.height;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double sx = std::min(static_cast<double>(w - 1), x * 0.997 + 0.31);
        const double sy = std::min(static_cast<double>(h - 1), y * 0.995 + 0.47);
        const int ix = static_cast<int>(sx), iy = static_cast<int>(sy);
        const double tx = sx - ix, ty = sy - iy;
        const int ix1 = std::min(ix + 1, w - 1), iy1 = std::min(iy + 1, h - 1);
        const double v00 = src.at(c, iy, ix), v10 = src.at(c, iy, ix1);
        const double v01 = src.at(c, iy1, ix), v11 = src.at(c, iy1, ix1);
        const double top = v00 + (v10 - v00) * tx;
        const double bottom = v01 + (v11 - v01) * tx;
        dst.at(c, y, x) = top + (bottom - top) * ty;
      }
}

}  // namespace bench_detail

inline BenchResult run_bench(const RigConfig& rig, int repetitions,
                             TransferSpace space = TransferSpace::decorrelated,
                             const HarmonizeConfig& cfg = {}) {
  using namespace bench_detail;
  if (repetitions < 10)
    throw Error(Errc::domain_error, "bench needs >= 10 repetitions, got " + std::to_string(repetitions));
  if (const ValidationResult r = validate_rig(rig); !r.ok()) throw Error(r.code, r.field + ": " + r.message);

  const ReferencePlan plan = ReferencePlan::chain_default(rig);
  const int n = rig.size();
  const int w = rig.cameras[0].image.width, h = rig.cameras[0].image.height;

  std::vector<double> t_meta, t_remap, t_stats, t_transfer, t_gct_total;
  WorkingImage scratch(w, h);

  // Warm-up, outside the timed reps.
  (void)harmonize_rig(rig, cfg);

  for (int rep = 0; rep < repetitions; ++rep) {
    auto t0 = Clock::now();
    const HarmonizedRig hr = harmonize_rig(rig, cfg);
    t_meta.push_back(ms_since(t0));
    (void)hr;

    t0 = Clock::now();
    for (int i = 0; i < n; ++i) remap_frame(rig.cameras[static_cast<std::size_t>(i)].image, scratch);
    const double remap_ms = ms_since(t0);

    // The plan loop mirrors run_gct_rig, with stats and transfer timed
    // separately.
    std::map<std::string, int> index;
    for (int i = 0; i < n; ++i) index[rig.cameras[static_cast<std::size_t>(i)].id] = i;
    std::vector<ImageBuffer> images;
    for (const CameraFrame& f : rig.cameras) images.push_back(f.image);

    double stats_ms = 0.0, transfer_ms = 0.0;
    for (const auto& [src_id, ref_id] : plan.edges) {
      const int i = index.at(src_id), ref = index.at(ref_id);
      Region src_patch, ref_patch;
      if (ref == rig.right_neighbor(i)) {
        const int k = rig.pair_overlap(i);
        src_patch = {w - k, 0, k, h};
        ref_patch = {0, 0, k, h};
      } else {
        const int k = rig.pair_overlap(ref);
        src_patch = {0, 0, k, h};
        ref_patch = {w - k, 0, k, h};
      }
      t0 = Clock::now();
      const ChannelStats ss = patch_stats(images[static_cast<std::size_t>(i)], src_patch, space);
      const ChannelStats rs = patch_stats(images[static_cast<std::size_t>(ref)], ref_patch, space);
      stats_ms += ms_since(t0);
      t0 = Clock::now();
      images[static_cast<std::size_t>(i)] = color_transfer(images[static_cast<std::size_t>(i)], ss, rs, space);
      transfer_ms += ms_since(t0);
    }
    t_remap.push_back(remap_ms);
    t_stats.push_back(stats_ms);
    t_transfer.push_back(transfer_ms);
    t_gct_total.push_back(remap_ms + stats_ms + transfer_ms);
  }

  BenchResult result;
  result.repetitions = repetitions;
  result.metadata.method = "metadata";
  result.metadata.items.push_back({"apply logistic curve", median(t_meta)});
  result.metadata.total_ms = median(t_meta);
  result.gct.method = "gct";
  result.gct.items.push_back({"project to ground (remap analogue)", median(t_remap)});
  result.gct.items.push_back({"compute color statistics", median(t_stats)});
  result.gct.items.push_back({"apply global transfer", median(t_transfer)});
  result.gct.total_ms = median(t_gct_total);
  result.ratio = result.metadata.total_ms / result.gct.total_ms;
  return result;
}

inline std::string format_bench_result(const BenchResult& r) {
  std::ostringstream out;
  auto row = [&](const std::string& method, const std::string& stage, double ms) {
    out << method;
    for (std::size_t i = method.size(); i < 12; ++i) out << ' ';
    out << stage;
    for (std::size_t i = stage.size(); i < 42; ++i) out << ' ';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%10.4f", ms);
    out << buf << " ms\n";
  };
  out << "repetitions: " << r.repetitions << " (median)\n";
  for (const BenchLineItem& it : r.metadata.items) row(r.metadata.method, it.name, it.ms);
  row(r.metadata.method, "total", r.metadata.total_ms);
  for (const BenchLineItem& it : r.gct.items) row(r.gct.method, it.name, it.ms);
  row(r.gct.method, "total", r.gct.total_ms);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "ratio (metadata/gct): %.3f\n", r.ratio);
  out << buf;
  return out.str();
}

}  // namespace mch
