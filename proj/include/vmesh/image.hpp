// Copyright 2026 The VMesh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vmesh/math.hpp"

namespace vmesh {

/// Raw 8-bit image with 1-4 interleaved channels, row-major, row 0 at the top.
struct Image8 {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  Image8() = default;
  Image8(int w, int h, int c) : width(w), height(h), channels(c), data(std::size_t(w) * h * c, 0) {}

  std::uint8_t& at(int x, int y, int c) { return data[(std::size_t(y) * width + x) * channels + c]; }
  std::uint8_t at(int x, int y, int c) const {
    return data[(std::size_t(y) * width + x) * channels + c];
  }
  friend bool operator==(const Image8&, const Image8&) = default;
};

/// Writes an 8-bit, non-interlaced PNG. Output bytes depend only on the image contents.
void write_png(const std::filesystem::path& path, const Image8& image);
/// Reads an 8-bit PNG (gray, gray+alpha, RGB or RGBA). Throws std::runtime_error naming the path.
Image8 read_png(const std::filesystem::path& path);

struct Rgba {
  float r = 0.0f;
  float g = 0.0f;
  float b = 0.0f;
  float a = 0.0f;
  friend bool operator==(const Rgba&, const Rgba&) = default;
};

/// Rendered frame. Pixels hold premultiplied RGBA in [0,1]. `unorm8` records that the values
/// came from (or were rounded to) 8-bit storage.
class ImageRGBA {
 public:
  ImageRGBA() = default;
  ImageRGBA(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool unorm8() const { return unorm8_; }

  Rgba& at(int x, int y) { return pixels_[std::size_t(y) * width_ + x]; }
  const Rgba& at(int x, int y) const { return pixels_[std::size_t(y) * width_ + x]; }
  const std::vector<Rgba>& pixels() const { return pixels_; }

  Image8 to_image8() const;
  static ImageRGBA from_image8(const Image8& image);

  friend bool operator==(const ImageRGBA&, const ImageRGBA&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  bool unorm8_ = false;
  std::vector<Rgba> pixels_;
};

/// PSNR over RGB (alpha excluded), 99 dB when the images are identical.
double psnr(const ImageRGBA& a, const ImageRGBA& b);

inline constexpr double kPsnrCap = 99.0;

/// Binary PPM (P6), RGB only.
void write_ppm(const std::filesystem::path& path, const ImageRGBA& image);

}  // namespace vmesh
