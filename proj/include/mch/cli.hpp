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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mch/bench.hpp"
#include "mch/gct.hpp"
#include "mch/metrics.hpp"
#include "mch/pipeline.hpp"
#include "mch/rig_io.hpp"
#include "mch/synth.hpp"

// CLI surface. Exit codes: 0 success, 1 validation/schema errors, 2 I/O
// errors, 64 usage errors (unknown subcommand or flags).

namespace mch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 64;

namespace cli_detail {

inline ImageFormat parse_format(const std::string& s) {
  if (s == "png") return ImageFormat::png;
  if (s == "ppm") return ImageFormat::ppm;
  throw Error(Errc::validation_error, "unknown image format '" + s + "' (png|ppm)");
}

inline TransferSpace parse_space(const std::string& s) {
  if (s == "rgb") return TransferSpace::rgb;
  if (s == "decorrelated") return TransferSpace::decorrelated;
  throw Error(Errc::validation_error, "unknown transfer space '" + s + "' (rgb|decorrelated)");
}

inline GtmMode parse_gtm_mode(const std::string& s) {
  if (s == "compose") return GtmMode::compose;
  if (s == "literal-average") return GtmMode::literal_average;
  throw Error(Errc::validation_error, "unknown gtm mode '" + s + "' (compose|literal-average)");
}

}  // namespace cli_detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  using cli_detail::parse_format;
  using cli_detail::parse_gtm_mode;
  using cli_detail::parse_space;

  CLI::App app{"mch: multi-camera color and tone harmonization"};
  app.require_subcommand(1);

  // --- synth ---
  auto* synth = app.add_subcommand("synth", "generate a synthetic rig with known ground truth");
  std::string synth_out, synth_spec_file, synth_content = "textured-noise", synth_distort = "both",
              synth_format = "png";
  std::uint64_t synth_seed = 1;
  int synth_cameras = 4, synth_width = 512, synth_height = 256, synth_overlap = 0;
  synth->add_option("outdir", synth_out, "output rig directory")->required();
  auto* spec_opt = synth->add_option("--spec", synth_spec_file, "declarative scene spec file");
  synth->add_option("--seed", synth_seed, "deterministic seed")->excludes(spec_opt);
  synth->add_option("--cameras", synth_cameras, "camera count")->excludes(spec_opt);
  synth->add_option("--width", synth_width, "camera image width")->excludes(spec_opt);
  synth->add_option("--height", synth_height, "camera image height")->excludes(spec_opt);
  synth->add_option("--overlap-cols", synth_overlap, "overlap columns per pair (0 = width/8)")->excludes(spec_opt);
  synth->add_option("--content", synth_content, "gradient|textured-noise|object-disparity")->excludes(spec_opt);
  synth->add_option("--distort", synth_distort, "none|awb|gtm|both")->excludes(spec_opt);
  synth->add_option("--format", synth_format, "image format: png|ppm");

  // --- harmonize ---
  auto* harmonize = app.add_subcommand("harmonize", "harmonize a rig using its ISP metadata");
  std::string harm_in, harm_out, harm_mode = "compose", harm_format = "png";
  bool awb_only = false, gtm_only = false;
  harmonize->add_option("indir", harm_in, "input rig directory")->required();
  harmonize->add_option("outdir", harm_out, "output directory")->required();
  auto* awb_flag = harmonize->add_flag("--awb-only", awb_only, "apply only the AWB stage");
  harmonize->add_flag("--gtm-only", gtm_only, "apply only the GTM stage")->excludes(awb_flag);
  harmonize->add_option("--gtm-mode", harm_mode, "compose|literal-average");
  harmonize->add_option("--format", harm_format, "image format: png|ppm");

  // --- gct ---
  auto* gct = app.add_subcommand("gct", "patch-based global color transfer baseline");
  std::string gct_in, gct_out, gct_space = "decorrelated", gct_format = "png";
  std::vector<std::string> gct_refs;
  gct->add_option("indir", gct_in, "input rig directory")->required();
  gct->add_option("outdir", gct_out, "output directory")->required();
  gct->add_option("--space", gct_space, "transfer space: rgb|decorrelated");
  gct->add_option("--ref", gct_refs, "plan edge source=reference (repeatable; default: chain rooted at camera 2)");
  gct->add_option("--format", gct_format, "image format: png|ppm");

  // --- eval ---
  auto* eval = app.add_subcommand("eval", "seam report comparing two rig directories");
  std::string eval_before, eval_after, eval_out_file, eval_mode = "compose";
  bool eval_awb_only = false, eval_gtm_only = false;
  eval->add_option("before", eval_before, "original rig directory")->required();
  eval->add_option("after", eval_after, "harmonized rig directory")->required();
  eval->add_option("--out", eval_out_file, "also write the report to this file");
  auto* eval_awb_flag = eval->add_flag("--awb-only", eval_awb_only, "gain profile assumes AWB stage only");
  eval->add_flag("--gtm-only", eval_gtm_only, "gain profile assumes GTM stage only")->excludes(eval_awb_flag);
  eval->add_option("--gtm-mode", eval_mode, "compose|literal-average");

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "runtime comparison: metadata path vs patch GCT path");
  std::string bench_in, bench_space = "decorrelated";
  int bench_reps = 30;
  bench->add_option("indir", bench_in, "input rig directory")->required();
  bench->add_option("--reps", bench_reps, "repetitions (>= 10)")->check(CLI::Range(10, 1000000));
  bench->add_option("--space", bench_space, "GCT transfer space: rgb|decorrelated");

  // --- strip ---
  auto* strip = app.add_subcommand("strip", "side-by-side comparison image with seam markers");
  std::string strip_in, strip_out;
  strip->add_option("indir", strip_in, "input rig directory")->required();
  strip->add_option("outimage", strip_out, "output image path (.png or .ppm)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (synth->parsed()) {
      SceneSpec spec;
      if (!synth_spec_file.empty()) {
        const auto bytes = read_file_bytes(synth_spec_file);
        spec = parse_scene_spec(std::string(bytes.begin(), bytes.end()), synth_spec_file);
      } else {
        spec = make_scene_spec(synth_seed, synth_cameras, synth_width, synth_height, synth_overlap,
                               parse_scene_content(synth_content, "--content"),
                               parse_distort_kind(synth_distort, "--distort"));
      }
      write_rig(generate_rig(spec), synth_out, parse_format(synth_format));
    } else if (harmonize->parsed()) {
      const RigConfig rig = read_rig(harm_in);
      HarmonizeConfig cfg;
      cfg.enable_awb = !gtm_only;
      cfg.enable_gtm = !awb_only;
      cfg.gtm_mode = parse_gtm_mode(harm_mode);
      const HarmonizedRig h = harmonize_rig(rig, cfg);
      write_harmonized(h, rig.overlap_cols, harm_out, parse_format(harm_format));
    } else if (gct->parsed()) {
      const RigConfig rig = read_rig(gct_in);
      ReferencePlan plan;
      if (gct_refs.empty()) {
        plan = ReferencePlan::chain_default(rig);
      } else {
        for (const std::string& edge : gct_refs) {
          const auto eq = edge.find('=');
          if (eq == std::string::npos)
            throw Error(Errc::validation_error, "--ref expects source=reference, got '" + edge + "'");
          plan.edges.emplace_back(edge.substr(0, eq), edge.substr(eq + 1));
        }
      }
      const HarmonizedRig h = run_gct_rig(rig, plan, parse_space(gct_space));
      write_harmonized(h, rig.overlap_cols, gct_out, parse_format(gct_format));
    } else if (eval->parsed()) {
      const RigConfig before = read_rig(eval_before);
      const RigConfig after = read_rig(eval_after);
      if (before.size() != after.size())
        throw Error(Errc::dimension_mismatch, "rig directories hold different camera counts");
      std::vector<ImageBuffer> after_images;
      for (int i = 0; i < before.size(); ++i) {
        if (before.cameras[static_cast<std::size_t>(i)].id != after.cameras[static_cast<std::size_t>(i)].id)
          throw Error(Errc::validation_error, "camera order differs between the two directories");
        after_images.push_back(after.cameras[static_cast<std::size_t>(i)].image);
      }
      HarmonizeConfig cfg;
      cfg.enable_awb = !eval_gtm_only;
      cfg.enable_gtm = !eval_awb_only;
      cfg.gtm_mode = parse_gtm_mode(eval_mode);
      const SeamReport report = make_seam_report(before, after_images, cfg);
      const std::string text = serialize_seam_report(report);
      out << text;
      if (!eval_out_file.empty())
        write_file_bytes(eval_out_file, std::vector<std::uint8_t>(text.begin(), text.end()));
    } else if (bench->parsed()) {
      const RigConfig rig = read_rig(bench_in);
      const BenchResult result = run_bench(rig, bench_reps, parse_space(bench_space));
      out << format_bench_result(result);
    } else if (strip->parsed()) {
      const RigConfig rig = read_rig(strip_in);
      std::vector<ImageBuffer> images;
      for (const CameraFrame& f : rig.cameras) images.push_back(f.image);
      write_image(strip_out, compose_strip(images));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return (e.code() == Errc::io_error || e.code() == Errc::missing_file) ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  std::vector<std::string> full;
  full.push_back("mch");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : full) argv.push_back(s.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mch::cli
