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

#include <filesystem>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "mch/rig_io.hpp"
#include "mch/synth.hpp"

using namespace mch;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mch_test_" + std::to_string(SplitMix(std::random_device{}()).next()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

ImageBuffer random_image(SplitMix& rng, int w, int h) {
  ImageBuffer img(w, h);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.next() & 0xFF);
  return img;
}

MetadataRecord random_record(SplitMix& rng, const std::string& id) {
  MetadataRecord rec;
  rec.camera = id;
  for (int c = 0; c < 3; ++c) rec.awb[c] = rng.uniform(0.2, 3.0);
  rec.gtm = make_gamma_lut(rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.4));
  return rec;
}

}  // namespace

TEST_CASE("metadata serialize/parse is the identity") {
  SplitMix rng(61);
  for (int i = 0; i < 20; ++i) {
    const MetadataRecord rec = random_record(rng, "cam" + std::to_string(i));
    const MetadataRecord back = parse_metadata(serialize_metadata(rec), "roundtrip");
    CHECK(back.camera == rec.camera);
    for (int c = 0; c < 3; ++c) CHECK(back.awb[c] == rec.awb[c]);
    CHECK(back.gtm.entries == rec.gtm.entries);
  }
}

TEST_CASE("metadata schema violations") {
  SplitMix rng(62);
  const MetadataRecord rec = random_record(rng, "front");
  const std::string good = serialize_metadata(rec);

  SECTION("255-entry LUT names the length") {
    // Drop the last token of the gtm block.
    std::string bad = good.substr(0, good.find_last_of(' '));
    bad += "\n";
    try {
      parse_metadata(bad, "t");
      FAIL("expected SchemaError");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::schema_error);
      CHECK(std::string(e.what()).find("255") != std::string::npos);
    }
  }
  SECTION("unknown field rejected") {
    CHECK_THROWS_AS(parse_metadata(good + "exposure: 0.5\n", "t"), Error);
  }
  SECTION("wrong schema id rejected") {
    std::string bad = good;
    bad.replace(bad.find("mch-camera-metadata/1"), std::string("mch-camera-metadata/1").size(),
                "mch-camera-metadata/9");
    CHECK_THROWS_AS(parse_metadata(bad, "t"), Error);
  }
  SECTION("missing awb rejected") {
    std::string bad;
    std::istringstream in(good);
    std::string line;
    while (std::getline(in, line))
      if (line.rfind("awb:", 0) != 0) bad += line + "\n";
    CHECK_THROWS_AS(parse_metadata(bad, "t"), Error);
  }
  SECTION("comments and blank lines are fine") {
    const MetadataRecord back = parse_metadata("# comment\n\n" + good, "t");
    CHECK(back.camera == "front");
  }
}

TEST_CASE("PNG encode/decode round trip") {
  SplitMix rng(63);
  for (auto [w, h] : {std::pair{1, 1}, {7, 3}, {64, 32}, {33, 17}}) {
    const ImageBuffer img = random_image(rng, w, h);
    const ImageBuffer back = decode_png(encode_png(img));
    CHECK(back.width == w);
    CHECK(back.height == h);
    CHECK(back.data == img.data);
  }
}

TEST_CASE("PNG encoding is byte-deterministic") {
  SplitMix rng(64);
  const ImageBuffer img = random_image(rng, 32, 16);
  CHECK(encode_png(img) == encode_png(img));
}

TEST_CASE("PNG reader handles all five filters and other color types") {
  using namespace png_detail;
  const int w = 6, h = 5, bpp = 3;
  SplitMix rng(65);
  const ImageBuffer img = random_image(rng, w, h);
  const std::vector<std::uint8_t> rgb = to_interleaved_rgb(img);
  const std::size_t stride = static_cast<std::size_t>(w) * bpp;

  // Encode each row with a different filter (Sub, Up, Average, Paeth, None).
  std::vector<std::uint8_t> raw;
  const std::uint8_t filters[5] = {1, 2, 3, 4, 0};
  for (int y = 0; y < h; ++y) {
    raw.push_back(filters[y]);
    for (std::size_t x = 0; x < stride; ++x) {
      const int cur = rgb[static_cast<std::size_t>(y) * stride + x];
      const int a = x >= static_cast<std::size_t>(bpp) ? rgb[y * stride + x - bpp] : 0;
      const int b = y > 0 ? rgb[(y - 1) * stride + x] : 0;
      const int c = (y > 0 && x >= static_cast<std::size_t>(bpp)) ? rgb[(y - 1) * stride + x - bpp] : 0;
      int v = cur;
      switch (filters[y]) {
        case 1: v = cur - a; break;
        case 2: v = cur - b; break;
        case 3: v = cur - (a + b) / 2; break;
        case 4: v = cur - paeth(a, b, c); break;
        default: break;
      }
      raw.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
  }
  uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(comp_size);
  REQUIRE(compress2(compressed.data(), &comp_size, raw.data(), static_cast<uLong>(raw.size()), 6) == Z_OK);
  compressed.resize(comp_size);

  std::vector<std::uint8_t> file(kSignature, kSignature + 8);
  std::vector<std::uint8_t> ihdr;
  put_u32be(ihdr, w);
  put_u32be(ihdr, h);
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});
  append_chunk(file, "IHDR", ihdr);
  append_chunk(file, "IDAT", compressed);
  append_chunk(file, "IEND", {});

  const ImageBuffer back = decode_png(file);
  CHECK(back.data == img.data);
}

TEST_CASE("PNG reader accepts 8-bit grayscale and RGBA") {
  using namespace png_detail;
  auto build = [&](int w, int h, int color_type, const std::vector<std::uint8_t>& pixels) {
    const int bpp = color_type == 0 ? 1 : 4;
    const std::size_t stride = static_cast<std::size_t>(w) * bpp;
    std::vector<std::uint8_t> raw;
    for (int y = 0; y < h; ++y) {
      raw.push_back(0);
      raw.insert(raw.end(), pixels.begin() + static_cast<std::ptrdiff_t>(y * stride),
                 pixels.begin() + static_cast<std::ptrdiff_t>((y + 1) * stride));
    }
    uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(comp_size);
    REQUIRE(compress2(compressed.data(), &comp_size, raw.data(), static_cast<uLong>(raw.size()), 6) == Z_OK);
    compressed.resize(comp_size);
    std::vector<std::uint8_t> file(kSignature, kSignature + 8);
    std::vector<std::uint8_t> ihdr;
    put_u32be(ihdr, static_cast<std::uint32_t>(w));
    put_u32be(ihdr, static_cast<std::uint32_t>(h));
    ihdr.insert(ihdr.end(), {8, static_cast<std::uint8_t>(color_type), 0, 0, 0});
    append_chunk(file, "IHDR", ihdr);
    append_chunk(file, "IDAT", compressed);
    append_chunk(file, "IEND", {});
    return file;
  };

  SECTION("grayscale replicates into all channels") {
    const ImageBuffer img = decode_png(build(2, 1, 0, {10, 200}));
    for (int c = 0; c < 3; ++c) {
      CHECK(img.at(c, 0, 0) == 10);
      CHECK(img.at(c, 0, 1) == 200);
    }
  }
  SECTION("RGBA drops the alpha plane") {
    const ImageBuffer img = decode_png(build(1, 1, 6, {11, 22, 33, 128}));
    CHECK(img.at(0, 0, 0) == 11);
    CHECK(img.at(1, 0, 0) == 22);
    CHECK(img.at(2, 0, 0) == 33);
  }
}

TEST_CASE("PNG reader rejects what it cannot represent") {
  using namespace png_detail;
  auto make_file = [&](std::uint8_t depth, std::uint8_t color, std::uint8_t interlace) {
    std::vector<std::uint8_t> file(kSignature, kSignature + 8);
    std::vector<std::uint8_t> ihdr;
    put_u32be(ihdr, 4);
    put_u32be(ihdr, 4);
    ihdr.insert(ihdr.end(), {depth, color, 0, 0, interlace});
    append_chunk(file, "IHDR", ihdr);
    append_chunk(file, "IDAT", {0x78, 0x9c, 0x03, 0x00, 0x00, 0x00, 0x00, 0x01});
    append_chunk(file, "IEND", {});
    return file;
  };
  CHECK_THROWS_AS(decode_png(make_file(16, 2, 0)), Error);  // 16-bit
  CHECK_THROWS_AS(decode_png(make_file(8, 3, 0)), Error);   // palette
  CHECK_THROWS_AS(decode_png(make_file(8, 2, 1)), Error);   // interlaced
  CHECK_THROWS_AS(decode_png({1, 2, 3, 4}), Error);         // not a PNG
}

TEST_CASE("PPM round trip and header validation") {
  SplitMix rng(66);
  const ImageBuffer img = random_image(rng, 19, 7);
  const ImageBuffer back = decode_ppm(encode_ppm(img));
  CHECK(back.data == img.data);

  const std::string with_comment = "P6\n# a comment\n2 1\n255\n" + std::string(6, '\x7f');
  const ImageBuffer commented = decode_ppm({with_comment.begin(), with_comment.end()});
  CHECK(commented.width == 2);
  CHECK(commented.at(0, 0, 0) == 0x7f);

  CHECK_THROWS_AS(decode_ppm({'P', '5', '\n'}), Error);
  const std::string wrong_maxval = "P6\n2 1\n65535\n" + std::string(12, 'x');
  CHECK_THROWS_AS(decode_ppm({wrong_maxval.begin(), wrong_maxval.end()}), Error);
}

TEST_CASE("rig directory round trip is bit-exact") {
  for (ImageFormat format : {ImageFormat::png, ImageFormat::ppm}) {
    TempDir tmp;
    const SceneSpec spec = make_scene_spec(70, 4, 64, 16, 8, SceneContent::textured_noise, DistortKind::both);
    const RigConfig rig = generate_rig(spec);
    write_rig(rig, tmp.path, format);
    const RigConfig back = read_rig(tmp.path);
    REQUIRE(back.size() == rig.size());
    CHECK(back.overlap_cols == rig.overlap_cols);
    for (int i = 0; i < rig.size(); ++i) {
      CHECK(back.cameras[static_cast<std::size_t>(i)].id == rig.cameras[static_cast<std::size_t>(i)].id);
      CHECK(back.cameras[static_cast<std::size_t>(i)].image.data == rig.cameras[static_cast<std::size_t>(i)].image.data);
      CHECK(back.cameras[static_cast<std::size_t>(i)].gtm.entries == rig.cameras[static_cast<std::size_t>(i)].gtm.entries);
      CHECK(back.cameras[static_cast<std::size_t>(i)].awb.r == rig.cameras[static_cast<std::size_t>(i)].awb.r);
    }
  }
}

TEST_CASE("read_rig failure modes") {
  TempDir tmp;
  const SceneSpec spec = make_scene_spec(71, 2, 32, 8, 4, SceneContent::gradient, DistortKind::none);
  const RigConfig rig = generate_rig(spec);
  write_rig(rig, tmp.path);

  SECTION("missing manifest") {
    TempDir empty;
    try {
      read_rig(empty.path);
      FAIL("expected MissingFile");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::missing_file);
    }
  }
  SECTION("missing image for a listed camera") {
    fs::remove(tmp.path / "cam0.png");
    try {
      read_rig(tmp.path);
      FAIL("expected MissingFile");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::missing_file);
      CHECK(std::string(e.what()).find("cam0") != std::string::npos);
    }
  }
  SECTION("metadata naming a different camera") {
    MetadataRecord rec{"other", rig.cameras[0].awb, rig.cameras[0].gtm, 1};
    write_file_bytes(tmp.path / "cam0.meta", [&] {
      const std::string s = serialize_metadata(rec);
      return std::vector<std::uint8_t>(s.begin(), s.end());
    }());
    CHECK_THROWS_AS(read_rig(tmp.path), Error);
  }
  SECTION("invalid metadata is reported with file and field") {
    // Break monotonicity in cam0's LUT.
    std::string text = rig_detail::read_text(tmp.path / "cam0.meta");
    RigConfig broken = rig;
    broken.cameras[0].gtm[100] = broken.cameras[0].gtm[99] - 5.0;
    // direct write of the broken record
    MetadataRecord rec{"cam0", broken.cameras[0].awb, broken.cameras[0].gtm, 1};
    rig_detail::write_text(tmp.path / "cam0.meta", serialize_metadata(rec));
    try {
      read_rig(tmp.path);
      FAIL("expected NonMonotoneLut");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::non_monotone_lut);
      CHECK(std::string(e.what()).find("gtm[100]") != std::string::npos);
    }
  }
}

TEST_CASE("harmonized output directory includes the gain report and reads back") {
  TempDir tmp;
  const SceneSpec spec = make_scene_spec(72, 4, 64, 16, 8, SceneContent::textured_noise, DistortKind::both);
  const RigConfig rig = generate_rig(spec);
  const HarmonizedRig h = harmonize_rig(rig, HarmonizeConfig{});
  write_harmonized(h, rig.overlap_cols, tmp.path);
  CHECK(fs::exists(tmp.path / kGainReportName));
  const RigConfig back = read_rig(tmp.path);
  for (int i = 0; i < rig.size(); ++i)
    CHECK(back.cameras[static_cast<std::size_t>(i)].image.data == h.frames[static_cast<std::size_t>(i)].image.data);
}

TEST_CASE("scene spec files") {
  const std::string text =
      "schema: mch-scene-spec/1\n"
      "seed: 7\n"
      "cameras: 4\n"
      "width: 64\n"
      "height: 16\n"
      "overlap_cols: 8\n"
      "content: gradient\n"
      "distort: awb\n"
      "awb.0: 1.05 1 0.95\n"
      "gamma.2: 1.25\n";
  const SceneSpec spec = parse_scene_spec(text, "t");
  CHECK(spec.seed == 7);
  CHECK(spec.cameras == 4);
  CHECK(spec.content == SceneContent::gradient);
  CHECK(spec.distortions[0].awb.r == 1.05);
  CHECK(spec.distortions[0].awb.b == 0.95);
  CHECK(spec.distortions[2].gtm[128] == make_gamma_lut(1.25)[128]);

  CHECK_THROWS_AS(parse_scene_spec(text + "haze: 1\n", "t"), Error);
  CHECK_THROWS_AS(parse_scene_spec("seed: 1\n", "t"), Error);  // no schema
  CHECK_THROWS_AS(parse_scene_spec(text + "awb.9: 1 1 1\n", "t"), Error);  // out of range
}

TEST_CASE("strip composition") {
  const SceneSpec spec = make_scene_spec(73, 3, 32, 8, 4, SceneContent::textured_noise, DistortKind::none);
  const RigConfig rig = generate_rig(spec);
  std::vector<ImageBuffer> images;
  for (const CameraFrame& f : rig.cameras) images.push_back(f.image);
  const ImageBuffer strip = compose_strip(images);
  CHECK(strip.width == 96);
  CHECK(strip.height == 8);
  // Tile content preserved away from markers; markers at tile junctions.
  CHECK(strip.at(0, 3, 5) == rig.cameras[0].image.at(0, 3, 5));
  CHECK(strip.at(0, 0, 32) == 255);
  CHECK(strip.at(1, 0, 32) == 0);
  CHECK(strip.at(2, 0, 64) == 255);
}
