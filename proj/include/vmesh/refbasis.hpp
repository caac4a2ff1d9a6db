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
#include <span>
#include <vector>

#include "vmesh/math.hpp"
#include "vmesh/scene.hpp"

namespace vmesh {

/// Face order +X, -X, +Y, -Y, +Z, -Z.
inline constexpr int kCubeFaces = 6;

struct CubeCoord {
  int face = 0;
  double u = 0.0;  // [0,1] across the face, texel x grows with u
  double v = 0.0;  // [0,1] down the face, texel row grows with v
};

/// Major-axis face selection with the usual cube-map orientation per face.
CubeCoord cube_coord(const Vec3& dir);
/// Unit direction through the center of texel (x, y) on `face`.
Vec3 cube_texel_direction(int face, int x, int y, int edge);

/// N base environment cube maps, stored as float RGB.
class CubeMapSet {
 public:
  CubeMapSet() = default;
  explicit CubeMapSet(int edge);

  int edge() const { return edge_; }
  Rgb texel(int basis, int face, int x, int y) const {
    const float* p = &data_[index(basis, face, x, y)];
    return {p[0], p[1], p[2]};
  }
  void set_texel(int basis, int face, int x, int y, const Rgb& c) {
    float* p = &data_[index(basis, face, x, y)];
    p[0] = float(c.r);
    p[1] = float(c.g);
    p[2] = float(c.b);
  }

 private:
  std::size_t index(int basis, int face, int x, int y) const {
    return (((std::size_t(basis) * kCubeFaces + face) * edge_ + y) * edge_ + x) * 3;
  }

  int edge_ = 0;
  std::vector<float> data_;
};

/// Bilinear lookup on the selected face, clamped at face edges.
Rgb sample_cubemap(const CubeMapSet& maps, int basis, const Vec3& dir);

/// Fresnel-like attenuation table. Column index follows cos(theta), row index follows metallic.
class AttenuationLut {
 public:
  AttenuationLut() = default;
  explicit AttenuationLut(int size, float fill = 0.0f);

  int size() const { return size_; }
  float at(int u, int v) const { return table_[std::size_t(v) * size_ + u]; }
  void set(int u, int v, float value) { table_[std::size_t(v) * size_ + u] = value; }

 private:
  int size_ = 0;
  std::vector<float> table_;
};

double schlick_attenuation(double cos_theta, double metallic);

/// Bilinear lookup; both inputs are clamped to [0,1].
double attenuation(const AttenuationLut& lut, double cos_theta, double metallic);
/// Throws std::invalid_argument for size < 2.
AttenuationLut bake_attenuation_lut(LutKind kind, int size);
CubeMapSet bake_env_maps(const SceneDescription& scene, int edge);

/// Per-point appearance: 11 scalar features plus the shading normal.
struct MaterialSample {
  Rgb diffuse;
  Rgb tint;
  std::array<double, kBasisCount> weights{};
  double metallic = 0.0;
  Vec3 normal{0.0, 0.0, 1.0};
};

inline constexpr int kMaterialFeatureCount = 3 + 3 + kBasisCount + 1;

/// Mirror of omega_o (pointing toward the viewer) about n.
Vec3 reflect(const Vec3& omega_o, const Vec3& n);
Rgb specular_color(std::span<const double, kBasisCount> weights,
                   std::span<const Rgb, kBasisCount> base_colors);
double srgb_encode(double linear);
/// Clamp to [0,1] followed by the sRGB transfer curve.
Rgb tone_map(const Rgb& c);

/// Full appearance model: tone_map(diffuse + tint * A(cos, m) * specular(reflect(omega_o, n))).
Rgb shade(const MaterialSample& mat, const Vec3& omega_o, const CubeMapSet& maps,
          const AttenuationLut& lut);

}  // namespace vmesh
