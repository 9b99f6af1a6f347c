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

#include <catch2/catch_amalgamated.hpp>

#include "mch/pipeline.hpp"
#include "mch/synth.hpp"
#include "reference.hpp"

using namespace mch;

namespace {

RigConfig rotated(const RigConfig& rig, int shift) {
  RigConfig out;
  const int n = rig.size();
  for (int i = 0; i < n; ++i) {
    out.cameras.push_back(rig.cameras[static_cast<std::size_t>((i + shift) % n)]);
    out.overlap_cols.push_back(rig.overlap_cols[static_cast<std::size_t>((i + shift) % n)]);
  }
  return out;
}

}  // namespace

TEST_CASE("equal metadata across cameras is a bit-exact no-op (compose mode)") {
  SplitMix rng(100);
  for (int trial = 0; trial < 5; ++trial) {
    SceneSpec spec = make_scene_spec(900 + trial, 4, 64, 24, 8, SceneContent::textured_noise,
                                     DistortKind::none);
    const AwbGains shared_awb{rng.uniform(0.9, 1.15), rng.uniform(0.9, 1.15), rng.uniform(0.9, 1.15)};
    const GtmLut shared_gtm = make_gamma_lut(rng.uniform(0.6, 1.7));
    for (CameraDistortion& d : spec.distortions) {
      d.awb = shared_awb;
      d.gtm = shared_gtm;
    }
    const RigConfig rig = generate_rig(spec);
    const HarmonizedRig h = harmonize_rig(rig, HarmonizeConfig{});
    for (int i = 0; i < rig.size(); ++i)
      CHECK(h.frames[static_cast<std::size_t>(i)].image.data == rig.cameras[static_cast<std::size_t>(i)].image.data);
  }
}

TEST_CASE("center column is bit-identical to the input") {
  for (int trial = 0; trial < 10; ++trial) {
    const SceneSpec spec = make_scene_spec(300 + trial, 3 + trial % 3, 64, 16, 8,
                                           SceneContent::textured_noise, DistortKind::both);
    const RigConfig rig = generate_rig(spec);
    const HarmonizedRig h = harmonize_rig(rig, HarmonizeConfig{});
    const int cx = rig.cameras[0].image.width / 2;
    for (int i = 0; i < rig.size(); ++i)
      for (int c = 0; c < 3; ++c)
        for (int y = 0; y < rig.cameras[0].image.height; ++y)
          REQUIRE(h.frames[static_cast<std::size_t>(i)].image.at(c, y, cx) ==
                  rig.cameras[static_cast<std::size_t>(i)].image.at(c, y, cx));
  }
}

TEST_CASE("relabeling the ring rotates the outputs bit-exactly") {
  const SceneSpec spec = make_scene_spec(77, 4, 64, 16, 8, SceneContent::textured_noise, DistortKind::both);
  const RigConfig rig = generate_rig(spec);
  const HarmonizedRig base = harmonize_rig(rig, HarmonizeConfig{});
  for (int shift = 1; shift < 4; ++shift) {
    const HarmonizedRig rot = harmonize_rig(rotated(rig, shift), HarmonizeConfig{});
    for (int i = 0; i < 4; ++i) {
      CHECK(rot.frames[static_cast<std::size_t>(i)].id == base.frames[static_cast<std::size_t>((i + shift) % 4)].id);
      CHECK(rot.frames[static_cast<std::size_t>(i)].image.data ==
            base.frames[static_cast<std::size_t>((i + shift) % 4)].image.data);
    }
  }
}

TEST_CASE("AWB pass then GTM pass composes to the combined pass") {
  const SceneSpec spec = make_scene_spec(55, 4, 64, 16, 8, SceneContent::textured_noise, DistortKind::both);
  const RigConfig rig = generate_rig(spec);

  SECTION("real-valued mode is exact") {
    HarmonizeConfig awb_only{true, false, GtmMode::compose, false};
    HarmonizeConfig both{true, true, GtmMode::compose, false};
    std::vector<WorkingImage> staged = harmonize_rig_real(rig, awb_only);

    // Second stage applied manually on the working result.
    HarmonizeConfig gtm_cfg{false, true, GtmMode::compose, false};
    BlendWeightCache cache;
    const BlendWeights& wl = cache.get(64, Side::left_half);
    const BlendWeights& wr = cache.get(64, Side::right_half);
    for (int i = 0; i < rig.size(); ++i) {
      const PairParams lp = make_pair_params(rig.cameras[static_cast<std::size_t>(rig.left_neighbor(i))],
                                             rig.cameras[static_cast<std::size_t>(i)], gtm_cfg);
      const PairParams rp = make_pair_params(rig.cameras[static_cast<std::size_t>(i)],
                                             rig.cameras[static_cast<std::size_t>(rig.right_neighbor(i))], gtm_cfg);
      apply_gtm_half_inplace(staged[static_cast<std::size_t>(i)], Side::left_half, lp.corr2, wl);
      apply_gtm_half_inplace(staged[static_cast<std::size_t>(i)], Side::right_half, rp.corr1, wr);
    }

    const std::vector<WorkingImage> combined = harmonize_rig_real(rig, both);
    for (int i = 0; i < rig.size(); ++i)
      for (std::size_t p = 0; p < combined[static_cast<std::size_t>(i)].data.size(); ++p)
        REQUIRE(staged[static_cast<std::size_t>(i)].data[p] == combined[static_cast<std::size_t>(i)].data[p]);
  }

  SECTION("8-bit mode rounds once per pass, within one level") {
    HarmonizeConfig awb_only{true, false, GtmMode::compose, true};
    HarmonizeConfig gtm_only{false, true, GtmMode::compose, true};
    HarmonizeConfig both{true, true, GtmMode::compose, true};

    const HarmonizedRig pass1 = harmonize_rig(rig, awb_only);
    RigConfig staged_rig = rig;
    for (int i = 0; i < rig.size(); ++i)
      staged_rig.cameras[static_cast<std::size_t>(i)].image = pass1.frames[static_cast<std::size_t>(i)].image;
    const HarmonizedRig pass2 = harmonize_rig(staged_rig, gtm_only);
    const HarmonizedRig combined = harmonize_rig(rig, both);
    for (int i = 0; i < rig.size(); ++i)
      for (std::size_t p = 0; p < combined.frames[static_cast<std::size_t>(i)].image.data.size(); ++p) {
        const int two_pass = pass2.frames[static_cast<std::size_t>(i)].image.data[p];
        const int one_pass = combined.frames[static_cast<std::size_t>(i)].image.data[p];
        REQUIRE(std::abs(two_pass - one_pass) <= 1);
      }
  }
}

TEST_CASE("locality: only the two neighbors matter") {
  const SceneSpec spec = make_scene_spec(66, 5, 64, 16, 8, SceneContent::textured_noise, DistortKind::both);
  const RigConfig rig = generate_rig(spec);
  const HarmonizedRig base = harmonize_rig(rig, HarmonizeConfig{});

  // Perturb camera 2's metadata; cameras 0 and 4 are not adjacent to it.
  RigConfig tweaked = rig;
  tweaked.cameras[2].awb = AwbGains{1.1, 0.95, 1.05};
  tweaked.cameras[2].gtm = make_gamma_lut(0.8);
  const HarmonizedRig changed = harmonize_rig(tweaked, HarmonizeConfig{});
  CHECK(changed.frames[0].image.data == base.frames[0].image.data);
  CHECK(changed.frames[4].image.data == base.frames[4].image.data);
  CHECK(changed.frames[2].image.data != base.frames[2].image.data);
}

TEST_CASE("two-camera ring: both halves use the same pair, degenerate but legal") {
  SceneSpec spec = make_scene_spec(88, 2, 64, 16, 8, SceneContent::gradient, DistortKind::awb_only);
  const RigConfig rig = generate_rig(spec);
  const HarmonizedRig h = harmonize_rig(rig, HarmonizeConfig{});
  REQUIRE(h.frames.size() == 2);
  // Outer boundary columns of the pair agree within one level: both cameras
  // meet at the averaged AWB on shared (column-invariant) content.
  const ImageBuffer& a = h.frames[0].image;
  const ImageBuffer& b = h.frames[1].image;
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < a.height; ++y)
      CHECK(std::abs(static_cast<int>(a.at(c, y, a.width - 1)) - static_cast<int>(b.at(c, y, 0))) <= 1);
}

TEST_CASE("harmonize_pair") {
  SECTION("identical frames come back unchanged") {
    SceneSpec spec = make_scene_spec(99, 2, 32, 8, 4, SceneContent::textured_noise, DistortKind::none);
    const RigConfig rig = generate_rig(spec);
    const auto [h1, h2] = harmonize_pair(rig.cameras[0], rig.cameras[0], HarmonizeConfig{});
    for (std::size_t i = 0; i < h1.data.size(); ++i) {
      CHECK(h1.data[i] == Catch::Approx(rig.cameras[0].image.data[i]).margin(1e-9));
      CHECK(h2.data[i] == Catch::Approx(rig.cameras[0].image.data[i]).margin(1e-9));
      CHECK(quantize_u8(h1.data[i]) == rig.cameras[0].image.data[i]);
      CHECK(quantize_u8(h2.data[i]) == rig.cameras[0].image.data[i]);
    }
  }

  SECTION("a brighter tone curve on frame 1 darkens its boundary, and vice versa") {
    SceneSpec spec = make_scene_spec(101, 2, 64, 8, 8, SceneContent::textured_noise, DistortKind::none);
    spec.distortions[0].gtm = make_gamma_lut(0.7);  // brighter
    spec.distortions[1].gtm = make_gamma_lut(1.5);  // darker
    const RigConfig rig = generate_rig(spec);
    HarmonizeConfig cfg{false, true, GtmMode::compose, false};
    const auto [h1, h2] = harmonize_pair(rig.cameras[0], rig.cameras[1], cfg);
    const int w = 64;
    double darkened = 0, brightened = 0;
    for (int y = 0; y < 8; ++y) {
      darkened += static_cast<double>(rig.cameras[0].image.at(1, y, w - 1)) - h1.at(1, y, w - 1);
      brightened += h2.at(1, y, 0) - static_cast<double>(rig.cameras[1].image.at(1, y, 0));
    }
    CHECK(darkened > 0.0);
    CHECK(brightened > 0.0);
  }

  SECTION("AWB-only difference on uniform gray: boundary columns at 75 and 150") {
    CameraFrame f1, f2;
    f1.id = "a";
    f2.id = "b";
    f1.image = ImageBuffer(32, 4);
    f2.image = ImageBuffer(32, 4);
    for (auto& v : f1.image.data) v = 100;
    for (auto& v : f2.image.data) v = 100;
    f1.awb = {2, 1, 1};
    f2.awb = {1, 1, 1};
    HarmonizeConfig cfg{true, false, GtmMode::compose, false};
    const auto [h1, h2] = harmonize_pair(f1, f2, cfg);
    CHECK(h1.at(0, 0, 31) == 75.0);
    CHECK(h2.at(0, 0, 0) == 150.0);
  }
}

TEST_CASE("validation failures propagate") {
  SceneSpec spec = make_scene_spec(1, 2, 32, 8, 4, SceneContent::gradient, DistortKind::none);
  RigConfig rig = generate_rig(spec);

  SECTION("insufficient cameras") {
    RigConfig one;
    one.cameras.push_back(rig.cameras[0]);
    one.overlap_cols.push_back(4);
    CHECK_THROWS_MATCHES(harmonize_rig(one, HarmonizeConfig{}), Error,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("InsufficientCameras")));
  }
  SECTION("both stages disabled") {
    HarmonizeConfig cfg{false, false, GtmMode::compose, true};
    CHECK_THROWS_AS(harmonize_rig(rig, cfg), Error);
  }
  SECTION("invalid frame is rejected with the offending field") {
    rig.cameras[1].awb.g = 0.0;
    try {
      harmonize_rig(rig, HarmonizeConfig{});
      FAIL("expected a validation error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::non_positive_awb_gain);
      CHECK(std::string(e.what()).find("awb.g") != std::string::npos);
    }
  }
}

TEST_CASE("oracle equivalence: independent scalar reference on 8x8 rigs") {
  for (int trial = 0; trial < 8; ++trial) {
    DistortionRanges ranges;
    ranges.shoulder_max = 0.3;  // exercise the shoulder family too
    const SceneSpec spec = make_scene_spec(7000 + trial, 2 + trial % 3, 8, 8, 2,
                                           SceneContent::textured_noise, DistortKind::both, ranges);
    const RigConfig rig = generate_rig(spec);

    for (const HarmonizeConfig cfg :
         {HarmonizeConfig{true, true, GtmMode::compose, false}, HarmonizeConfig{true, false, GtmMode::compose, false},
          HarmonizeConfig{false, true, GtmMode::compose, false},
          HarmonizeConfig{true, true, GtmMode::literal_average, false}}) {
      const std::vector<WorkingImage> got = harmonize_rig_real(rig, cfg);
      const std::vector<WorkingImage> want = testref::harmonize_rig_reference(rig, cfg);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i)
        for (std::size_t p = 0; p < got[i].data.size(); ++p) {
          REQUIRE(std::abs(got[i].data[p] - want[i].data[p]) <= 1e-9);
          REQUIRE(std::abs(static_cast<int>(quantize_u8(got[i].data[p])) -
                           static_cast<int>(quantize_u8(want[i].data[p]))) <= 1);
        }
    }
  }
}

TEST_CASE("gain report covers both sides with 16 sampled columns") {
  const SceneSpec spec = make_scene_spec(123, 4, 64, 8, 8, SceneContent::textured_noise, DistortKind::both);
  const RigConfig rig = generate_rig(spec);
  const HarmonizedRig h = harmonize_rig(rig, HarmonizeConfig{});
  REQUIRE(h.report.size() == 4);
  for (const CameraGainReport& rep : h.report) {
    CHECK(rep.left.sampled_weights.size() == 16);
    CHECK(rep.right.sampled_weights.size() == 16);
    CHECK(rep.left.sampled_weights.front().first == 0);
    CHECK(rep.left.sampled_weights.front().second == 1.0);
    CHECK(rep.right.sampled_weights.back().first == 63);
    CHECK(rep.right.sampled_weights.back().second == 1.0);
  }
}
