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

#include "vmesh/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>

namespace vmesh {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

int color_type_for(int channels) {
  switch (channels) {
    case 1:
      return PNG_COLOR_TYPE_GRAY;
    case 2:
      return PNG_COLOR_TYPE_GRAY_ALPHA;
    case 3:
      return PNG_COLOR_TYPE_RGB;
    case 4:
      return PNG_COLOR_TYPE_RGBA;
    default:
      throw std::invalid_argument("PNG images need 1-4 channels");
  }
}

[[noreturn]] void png_fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

}  // namespace

void write_png(const std::filesystem::path& path, const Image8& image) {
  const int color_type = color_type_for(image.channels);
  if (image.width <= 0 || image.height <= 0) png_fail(path, "empty image");
  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) png_fail(path, "cannot open for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    png_fail(path, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    png_fail(path, "libpng write error");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, image.width, image.height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  const std::size_t stride = std::size_t(image.width) * image.channels;
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(image.data.data() + stride * y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) png_fail(path, "write failed");
}

Image8 read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) png_fail(path, "cannot open for reading");
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    png_fail(path, "not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    png_fail(path, "libpng initialization failed");
  }
  Image8 image;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    png_fail(path, "corrupted or truncated PNG");
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  const int interlace = png_get_interlace_type(png, info);
  int channels = 0;
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY:
      channels = 1;
      break;
    case PNG_COLOR_TYPE_GRAY_ALPHA:
      channels = 2;
      break;
    case PNG_COLOR_TYPE_RGB:
      channels = 3;
      break;
    case PNG_COLOR_TYPE_RGBA:
      channels = 4;
      break;
    default:
      break;
  }
  if (bit_depth != 8 || channels == 0 || interlace != PNG_INTERLACE_NONE) {
    png_destroy_read_struct(&png, &info, nullptr);
    png_fail(path, "only 8-bit non-interlaced gray/RGB(A) PNGs are supported");
  }
  image = Image8(int(png_get_image_width(png, info)), int(png_get_image_height(png, info)),
                 channels);
  const std::size_t stride = std::size_t(image.width) * channels;
  for (int y = 0; y < image.height; ++y) png_read_row(png, image.data.data() + stride * y, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

ImageRGBA::ImageRGBA(int width, int height)
    : width_(width), height_(height), pixels_(std::size_t(width) * height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
}

Image8 ImageRGBA::to_image8() const {
  Image8 out(width_, height_, 4);
  auto to8 = [](float v) {
    return std::uint8_t(std::lround(std::clamp(double(v), 0.0, 1.0) * 255.0));
  };
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    out.data[i * 4 + 0] = to8(pixels_[i].r);
    out.data[i * 4 + 1] = to8(pixels_[i].g);
    out.data[i * 4 + 2] = to8(pixels_[i].b);
    out.data[i * 4 + 3] = to8(pixels_[i].a);
  }
  return out;
}

ImageRGBA ImageRGBA::from_image8(const Image8& image) {
  ImageRGBA out(image.width, image.height);
  out.unorm8_ = true;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      float c[4] = {0.0f, 0.0f, 0.0f, 1.0f};
      if (image.channels <= 2) {
        c[0] = c[1] = c[2] = image.at(x, y, 0) / 255.0f;
        if (image.channels == 2) c[3] = image.at(x, y, 1) / 255.0f;
      } else {
        for (int k = 0; k < image.channels; ++k) c[k] = image.at(x, y, k) / 255.0f;
      }
      out.at(x, y) = {c[0], c[1], c[2], c[3]};
    }
  }
  return out;
}

double psnr(const ImageRGBA& a, const ImageRGBA& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("psnr: image dimensions differ (" + std::to_string(a.width()) +
                                "x" + std::to_string(a.height()) + " vs " +
                                std::to_string(b.width()) + "x" + std::to_string(b.height()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    const Rgba& p = a.pixels()[i];
    const Rgba& q = b.pixels()[i];
    const double dr = double(p.r) - q.r;
    const double dg = double(p.g) - q.g;
    const double db = double(p.b) - q.b;
    sum += dr * dr + dg * dg + db * db;
  }
  const double mse = sum / (3.0 * double(a.pixels().size()));
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

void write_ppm(const std::filesystem::path& path, const ImageRGBA& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  const Image8 rgba = image.to_image8();
  for (std::size_t i = 0; i < image.pixels().size(); ++i) {
    out.write(reinterpret_cast<const char*>(&rgba.data[i * 4]), 3);
  }
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace vmesh
