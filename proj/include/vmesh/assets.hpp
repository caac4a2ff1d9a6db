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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmesh/image.hpp"
#include "vmesh/mesh.hpp"
#include "vmesh/mesher.hpp"
#include "vmesh/psh.hpp"
#include "vmesh/reference.hpp"
#include "vmesh/sparsevol.hpp"

namespace vmesh {

inline constexpr int kAssetsVersion = 1;
inline constexpr double kDefaultSigmaMax = 200.0;

/// q = round(255 clamp((v - min) / (max - min), 0, 1)). Requires max > min.
std::uint8_t quantize(double v, double min, double max);
double dequantize(std::uint8_t q, double min, double max);

struct ChannelRange {
  double min = 0.0;
  double max = 1.0;
  friend bool operator==(const ChannelRange&, const ChannelRange&) = default;
};

/// 8-bit image plus the value range of each channel.
struct QuantizedImage {
  Image8 image;
  std::vector<ChannelRange> ranges;

  double value(int x, int y, int c) const {
    return dequantize(image.at(x, y, c), ranges[c].min, ranges[c].max);
  }
  bool empty() const { return image.data.empty(); }
  friend bool operator==(const QuantizedImage&, const QuantizedImage&) = default;
};

/// Interleaved float values (width * height * ranges.size()) to an 8-bit image.
QuantizedImage quantize_image(std::span<const float> values, int width, int height,
                              std::vector<ChannelRange> ranges);
/// Per-channel [min, max] of the data; a flat channel gets max = min + 1.
std::vector<ChannelRange> data_ranges(std::span<const float> values, int channels);

struct VolumeAssets {
  int grid_n = 0;
  int block_b = 16;
  double sigma_max = kDefaultSigmaMax;
  std::size_t occupied_voxels = 0;
  std::vector<IVec3> block_coords;  // order used to build the hash; slots index into it
  PshTable psh;
  /// Brick atlas of (m_bar B)^3 voxels, z-slices stacked vertically.
  QuantizedImage diffuse;        // RGB
  QuantizedImage tint;           // RGB
  QuantizedImage normal;         // RGB, (n + 1) / 2
  QuantizedImage weights;        // RGBA
  QuantizedImage density_metal;  // R density in [0, sigma_max], G metallic, B unused
  std::vector<std::uint8_t> occupancy;

  bool empty() const { return block_coords.empty(); }
  int atlas_dim() const { return psh.m_bar * block_b; }
  friend bool operator==(const VolumeAssets&, const VolumeAssets&) = default;
};

/// Everything the renderer reads, already in the quantized domain.
struct VMeshAssets {
  Aabb bounds;
  TriMesh mesh;  // with per-corner UVs when non-empty
  QuantizedImage tex_normal;   // RGB, (n + 1) / 2
  QuantizedImage tex_diffuse;  // RGB
  QuantizedImage tex_tint;     // RGB
  QuantizedImage tex_weights;  // RGBA
  QuantizedImage tex_metal;    // gray
  std::array<QuantizedImage, kBasisCount> env;  // RGB, edge x 6 edge, faces +X -X +Y -Y +Z -Z
  QuantizedImage lut;                           // gray, cos(theta) along x, metallic along y
  VolumeAssets volume;

  int atlas_size() const { return tex_normal.image.width; }
  int env_edge() const { return env[0].image.width; }
  friend bool operator==(const VMeshAssets&, const VMeshAssets&) = default;
};

/// Quantizes baked float data into container form.
VMeshAssets make_assets(const Aabb& bounds, const TriMesh& mesh, const TextureMaps& textures,
                        const Appearance& appearance, const SparseVolume& volume,
                        const PshTable& psh, double sigma_max = kDefaultSigmaMax);

/// Dequantized cube maps and LUT.
Appearance decode_appearance(const VMeshAssets& assets);

/// Invariant checks; each failure reads "<check>: <detail>".
std::vector<std::string> check_assets(const VMeshAssets& assets);

class ContainerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes manifest.json, mesh.obj, the PNG maps and occupancy.bin. Volume maps and offsets.png
/// are omitted for an empty volume. Output bytes depend only on the assets.
void save_container(const VMeshAssets& assets, const std::filesystem::path& dir);

struct ContainerInspection {
  bool loaded = false;
  VMeshAssets assets;
  std::vector<std::string> failures;
};

/// Reads and validates a container, collecting failures instead of throwing.
ContainerInspection inspect_container(const std::filesystem::path& dir);
/// Throws ContainerError listing every failure.
VMeshAssets load_container(const std::filesystem::path& dir);

}  // namespace vmesh
