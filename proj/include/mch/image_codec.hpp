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

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "mch/types.hpp"

// Lossless 8-bit image I/O: PNG (RGB written; 8-bit gray/RGB/RGBA
// non-interlaced read) and binary PPM (P6) as the zero-dependency fallback.
// Compression, CRC and decompression come from zlib; the container and
// filter logic lives here. Encoding is deterministic: fixed filter choice
// and compression level, so identical images produce identical files.

namespace mch {

// ---------------------------------------------------------------------------
// File helpers (atomic per file: write temp, rename)

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::io_error, "read failed for '" + path.string() + "'");
  return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open '" + tmp.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::io_error, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::io_error, "rename to '" + path.string() + "' failed: " + ec.message());
}

// ---------------------------------------------------------------------------
// Interleaved <-> planar

inline std::vector<std::uint8_t> to_interleaved_rgb(const ImageBuffer& img) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(img.width) * img.height * 3);
  std::size_t o = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) out[o++] = img.at(c, y, x);
  return out;
}

inline ImageBuffer from_interleaved(const std::uint8_t* data, int width, int height, int in_channels) {
  ImageBuffer img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::uint8_t* px = data + (static_cast<std::size_t>(y) * width + x) * in_channels;
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = in_channels == 1 ? px[0] : px[c];
    }
  return img;
}

// ---------------------------------------------------------------------------
// PNG

namespace png_detail {

inline void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_u32be(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

inline void append_chunk(std::vector<std::uint8_t>& out, const char type[5],
                         const std::vector<std::uint8_t>& data) {
  put_u32be(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const std::uint32_t crc = static_cast<std::uint32_t>(
      ::crc32(0, out.data() + type_at, static_cast<uInt>(4 + data.size())));
  put_u32be(out, crc);
}

inline std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

inline const std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

}  // namespace png_detail

inline std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  using namespace png_detail;
  const std::vector<std::uint8_t> rgb = to_interleaved_rgb(img);

  // Raw scanline stream: filter byte 0 (None) per row.
  const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(img.height) * (stride + 1));
  for (int y = 0; y < img.height; ++y) {
    std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
    row[0] = 0;
    std::memcpy(row + 1, rgb.data() + static_cast<std::size_t>(y) * stride, stride);
  }

  uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(comp_size);
  if (::compress2(compressed.data(), &comp_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw Error(Errc::io_error, "PNG deflate failed");
  compressed.resize(comp_size);

  std::vector<std::uint8_t> out(kSignature, kSignature + 8);
  std::vector<std::uint8_t> ihdr;
  put_u32be(ihdr, static_cast<std::uint32_t>(img.width));
  put_u32be(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // color type: truecolor
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter method
  ihdr.push_back(0);  // no interlace
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT", compressed);
  append_chunk(out, "IEND", {});
  return out;
}

inline ImageBuffer decode_png(const std::vector<std::uint8_t>& bytes, const std::string& context = "PNG") {
  using namespace png_detail;
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0)
    throw Error(Errc::schema_error, context + ": not a PNG file");

  int width = 0, height = 0, color_type = -1;
  std::vector<std::uint8_t> idat;
  std::size_t pos = 8;
  bool saw_ihdr = false, saw_iend = false;
  while (pos + 8 <= bytes.size() && !saw_iend) {
    const std::uint32_t len = get_u32be(&bytes[pos]);
    if (pos + 12 + len > bytes.size()) throw Error(Errc::schema_error, context + ": truncated chunk");
    const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
    const std::uint8_t* data = &bytes[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw Error(Errc::schema_error, context + ": bad IHDR length");
      width = static_cast<int>(get_u32be(data));
      height = static_cast<int>(get_u32be(data + 4));
      const int bit_depth = data[8];
      color_type = data[9];
      const int interlace = data[12];
      if (bit_depth != 8)
        throw Error(Errc::schema_error, context + ": only 8-bit PNG supported, got depth " + std::to_string(bit_depth));
      if (color_type != 0 && color_type != 2 && color_type != 6)
        throw Error(Errc::schema_error, context + ": unsupported color type " + std::to_string(color_type));
      if (interlace != 0) throw Error(Errc::schema_error, context + ": interlaced PNG not supported");
      if (width <= 0 || height <= 0) throw Error(Errc::schema_error, context + ": bad dimensions");
      saw_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      saw_iend = true;
    }
    // Ancillary chunks are skipped.
    pos += 12 + len;
  }
  if (!saw_ihdr || idat.empty()) throw Error(Errc::schema_error, context + ": missing IHDR or IDAT");

  const int bpp = color_type == 0 ? 1 : (color_type == 2 ? 3 : 4);
  const std::size_t stride = static_cast<std::size_t>(width) * bpp;
  const std::size_t raw_size = static_cast<std::size_t>(height) * (stride + 1);
  std::vector<std::uint8_t> raw(raw_size);
  uLongf dest_len = static_cast<uLongf>(raw_size);
  const int zrc = ::uncompress(raw.data(), &dest_len, idat.data(), static_cast<uLong>(idat.size()));
  if (zrc != Z_OK || dest_len != raw_size)
    throw Error(Errc::schema_error, context + ": inflate failed or size mismatch");

  // Undo per-row filters in place (output rows are packed, filter bytes dropped).
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(height) * stride);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[static_cast<std::size_t>(y) * (stride + 1)];
    const std::uint8_t* src = &raw[static_cast<std::size_t>(y) * (stride + 1) + 1];
    std::uint8_t* dst = &pixels[static_cast<std::size_t>(y) * stride];
    const std::uint8_t* prev = y > 0 ? &pixels[static_cast<std::size_t>(y - 1) * stride] : nullptr;
    for (std::size_t x = 0; x < stride; ++x) {
      const int a = x >= static_cast<std::size_t>(bpp) ? dst[x - bpp] : 0;
      const int b = prev ? prev[x] : 0;
      const int c = (prev && x >= static_cast<std::size_t>(bpp)) ? prev[x - bpp] : 0;
      int v = src[x];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: throw Error(Errc::schema_error, context + ": unknown filter " + std::to_string(filter));
      }
      dst[x] = static_cast<std::uint8_t>(v & 0xFF);
    }
  }
  return from_interleaved(pixels.data(), width, height, bpp);
}

// ---------------------------------------------------------------------------
// PPM (binary P6, maxval 255)

inline std::vector<std::uint8_t> encode_ppm(const ImageBuffer& img) {
  const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::vector<std::uint8_t> rgb = to_interleaved_rgb(img);
  out.insert(out.end(), rgb.begin(), rgb.end());
  return out;
}

inline ImageBuffer decode_ppm(const std::vector<std::uint8_t>& bytes, const std::string& context = "PPM") {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (std::isspace(bytes[pos])) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> int {
    skip_space();
    int v = 0;
    bool any = false;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos++] - '0');
      any = true;
    }
    if (!any) throw Error(Errc::schema_error, context + ": malformed header");
    return v;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
    throw Error(Errc::schema_error, context + ": not a binary PPM (P6) file");
  pos = 2;
  const int width = read_int();
  const int height = read_int();
  const int maxval = read_int();
  if (maxval != 255) throw Error(Errc::schema_error, context + ": only maxval 255 supported");
  ++pos;  // single whitespace after maxval
  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (width <= 0 || height <= 0 || pos + need > bytes.size())
    throw Error(Errc::schema_error, context + ": truncated pixel data");
  return from_interleaved(&bytes[pos], width, height, 3);
}

// ---------------------------------------------------------------------------
// Path-level API

enum class ImageFormat { png, ppm };

inline void write_image(const std::filesystem::path& path, const ImageBuffer& img) {
  const std::string ext = path.extension().string();
  if (ext == ".png")
    write_file_bytes(path, encode_png(img));
  else if (ext == ".ppm")
    write_file_bytes(path, encode_ppm(img));
  else
    throw Error(Errc::io_error, "unsupported image extension '" + ext + "' (use .png or .ppm)");
}

inline ImageBuffer read_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  const std::string ext = path.extension().string();
  if (ext == ".png") return decode_png(bytes, path.string());
  if (ext == ".ppm") return decode_ppm(bytes, path.string());
  throw Error(Errc::io_error, "unsupported image extension '" + ext + "' (use .png or .ppm)");
}

}  // namespace mch
