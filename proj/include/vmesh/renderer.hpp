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
#include <optional>
#include <vector>

#include "vmesh/assets.hpp"
#include "vmesh/camera.hpp"
#include "vmesh/image.hpp"
#include "vmesh/raster.hpp"

namespace vmesh {

struct RenderConfig {
  double step_scale = 0.5;  // march step in voxel edges
  double early_stop_transmittance = 1e-3;
  Rgba background{};
};

void validate_config(const RenderConfig& cfg);

struct GBufferTexel {
  bool covered = false;
  double t = 0.0;
  Vec3 normal{0.0, 0.0, 1.0};
  MaterialSample material;  // dequantized features; material.normal == normal
};

struct GBuffer {
  int width = 0;
  int height = 0;
  std::vector<GBufferTexel> texels;
  const GBufferTexel& at(int x, int y) const { return texels[std::size_t(y) * width + x]; }
};

struct VolumeResult {
  Rgb color;  // premultiplied
  double opacity = 0.0;
};

/// Four-pass renderer over immutable assets: box interval, mesh G-buffer with appearance
/// shading, occupancy-guarded sparse volume march, composite.
class Renderer {
 public:
  explicit Renderer(const VMeshAssets& assets);

  const VMeshAssets& assets() const { return *assets_; }
  const Appearance& appearance() const { return appearance_; }

  GBuffer rasterize_mesh(const CameraPose& cam) const;
  /// Box entry/exit clipped by the surface depth; nullopt when the box is missed.
  std::optional<Interval> march_interval(const Ray& ray, const GBufferTexel& texel) const;
  VolumeResult raymarch_volume(const Ray& ray, double t_start, double t_end,
                               const RenderConfig& cfg) const;
  ImageRGBA render_frame(const CameraPose& cam, const RenderConfig& cfg = {}) const;

  /// Dequantized record of an occupied voxel, or nullopt when its occupancy bit is clear.
  std::optional<VoxelRecord> fetch_voxel(const IVec3& voxel) const;

 private:
  MaterialSample fetch_surface(const Vec2& uv) const;

  const VMeshAssets* assets_;
  Appearance appearance_;
  std::array<std::array<float, 256>, 14> tex_decode_{};  // per texture channel
  std::array<std::array<float, 256>, 15> vol_decode_{};  // per volume channel
};

/// Pass-4 composite; premultiplied colors.
Rgba composite(const Rgb& c_vol, double m_vol, const Rgb& c_mesh, bool covered,
               const Rgba& background);

ImageRGBA render_frame(const VMeshAssets& assets, const CameraPose& cam,
                       const RenderConfig& cfg = {});

}  // namespace vmesh
