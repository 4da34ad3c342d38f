// Copyright 2026 The LayoutLab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <openssl/evp.h>
#include <png.h>

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "layoutlab/core.hpp"
#include "layoutlab/serialization.hpp"

namespace layoutlab {

using Bytes = std::vector<std::uint8_t>;

namespace detail {

inline void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

inline void png_error_throw(png_structp, png_const_charp msg) { throw IoError(msg); }
inline void png_warning_ignore(png_structp, png_const_charp) {}

inline Bytes encode_png(const std::uint8_t* pixels, int width, int height, int channels) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_throw, png_warning_ignore);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  Bytes out;
  try {
    if (!info) throw IoError("png_create_info_struct failed");
    png_set_write_fn(png, &out, png_append, nullptr);
    png_set_IHDR(png, info, width, height, 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    // Flat synthetic rasters compress well already at the fastest level.
    png_set_compression_level(png, 1);
    png_set_filter(png, 0, PNG_FILTER_SUB);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) {
      png_write_row(png, const_cast<png_bytep>(pixels + y * stride));
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

inline Bytes decode_png(std::span<const std::uint8_t> data, std::uint32_t format,
                        int& width, int& height) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, data.data(), data.size())) {
    throw IoError(std::string("png decode: ") + image.message);
  }
  image.format = format;
  Bytes pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError(std::string("png decode: ") + image.message);
  }
  width = static_cast<int>(image.width);
  height = static_cast<int>(image.height);
  return pixels;
}

}  // namespace detail

inline Bytes encode_png(const Image& img) {
  return detail::encode_png(img.bytes().data(), img.width(), img.height(), 3);
}

// 255 = update, 0 = preserve.
inline Bytes encode_png(const Mask& mask) {
  Bytes gray(mask.bits().size());
  std::transform(mask.bits().begin(), mask.bits().end(), gray.begin(),
                 [](std::uint8_t b) -> std::uint8_t { return b ? 255 : 0; });
  return detail::encode_png(gray.data(), mask.width(), mask.height(), 1);
}

inline Image decode_png_image(std::span<const std::uint8_t> data) {
  int w = 0, h = 0;
  Bytes px = detail::decode_png(data, PNG_FORMAT_RGB, w, h);
  Image img(w, h);
  std::copy(px.begin(), px.end(), img.bytes().begin());
  return img;
}

inline Mask decode_png_mask(std::span<const std::uint8_t> data) {
  int w = 0, h = 0;
  Bytes px = detail::decode_png(data, PNG_FORMAT_GRAY, w, h);
  Mask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set(x, y, px[static_cast<std::size_t>(y) * w + x] >= 128);
  }
  return m;
}

inline void write_bytes(const std::string& path, const Bytes& bytes) {
  write_text_file(path, std::string(bytes.begin(), bytes.end()));
}

inline Bytes read_bytes(const std::string& path) {
  const std::string s = read_text_file(path);
  return Bytes(s.begin(), s.end());
}

inline void write_png(const std::string& path, const Image& img) { write_bytes(path, encode_png(img)); }
inline void write_png(const std::string& path, const Mask& m) { write_bytes(path, encode_png(m)); }
inline Image read_png_image(const std::string& path) { return decode_png_image(read_bytes(path)); }
inline Mask read_png_mask(const std::string& path) { return decode_png_mask(read_bytes(path)); }

inline std::string base64_encode(std::span<const std::uint8_t> data) {
  std::string out(4 * ((data.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(),
                                static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

inline Bytes base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw InvalidArgument("base64 length not a multiple of 4");
  Bytes out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw InvalidArgument("malformed base64");
  // EVP_DecodeBlock keeps the bytes that padding stands in for.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

inline std::string image_to_base64(const Image& img) { return base64_encode(encode_png(img)); }
inline std::string mask_to_base64(const Mask& m) { return base64_encode(encode_png(m)); }
inline Image image_from_base64(std::string_view s) { return decode_png_image(base64_decode(s)); }
inline Mask mask_from_base64(std::string_view s) { return decode_png_mask(base64_decode(s)); }

}  // namespace layoutlab
