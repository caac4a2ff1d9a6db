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

#include "vmesh/refbasis.hpp"

#include <cmath>
#include <stdexcept>

namespace vmesh {

CubeCoord cube_coord(const Vec3& dir) {
  const Vec3 a = vabs(dir);
  double sc = 0.0;
  double tc = 0.0;
  double ma = 0.0;
  int face = 0;
  if (a.x >= a.y && a.x >= a.z) {
    ma = a.x;
    face = dir.x >= 0.0 ? 0 : 1;
    sc = dir.x >= 0.0 ? -dir.z : dir.z;
    tc = -dir.y;
  } else if (a.y >= a.z) {
    ma = a.y;
    face = dir.y >= 0.0 ? 2 : 3;
    sc = dir.x;
    tc = dir.y >= 0.0 ? dir.z : -dir.z;
  } else {
    ma = a.z;
    face = dir.z >= 0.0 ? 4 : 5;
    sc = dir.z >= 0.0 ? dir.x : -dir.x;
    tc = -dir.y;
  }
  if (ma == 0.0) return {4, 0.5, 0.5};
  return {face, 0.5 * (sc / ma + 1.0), 0.5 * (tc / ma + 1.0)};
}

Vec3 cube_texel_direction(int face, int x, int y, int edge) {
  const double sc = 2.0 * (x + 0.5) / edge - 1.0;
  const double tc = 2.0 * (y + 0.5) / edge - 1.0;
  Vec3 d;
  switch (face) {
    case 0:
      d = {1.0, -tc, -sc};
      break;
    case 1:
      d = {-1.0, -tc, sc};
      break;
    case 2:
      d = {sc, 1.0, tc};
      break;
    case 3:
      d = {sc, -1.0, -tc};
      break;
    case 4:
      d = {sc, -tc, 1.0};
      break;
    default:
      d = {-sc, -tc, -1.0};
      break;
  }
  return normalize(d);
}

CubeMapSet::CubeMapSet(int edge)
    : edge_(edge), data_(std::size_t(kBasisCount) * kCubeFaces * edge * edge * 3, 0.0f) {
  if (edge < 1) throw std::invalid_argument("cube map edge must be positive");
}

namespace {

Rgb lerp(const Rgb& a, const Rgb& b, double t) { return a + (b - a) * t; }

}  // namespace

Rgb sample_cubemap(const CubeMapSet& maps, int basis, const Vec3& dir) {
  const CubeCoord cc = cube_coord(dir);
  const int e = maps.edge();
  const double fx = cc.u * e - 0.5;
  const double fy = cc.v * e - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double tx = fx - x0f;
  const double ty = fy - y0f;
  const int x0 = std::clamp(int(x0f), 0, e - 1);
  const int x1 = std::clamp(int(x0f) + 1, 0, e - 1);
  const int y0 = std::clamp(int(y0f), 0, e - 1);
  const int y1 = std::clamp(int(y0f) + 1, 0, e - 1);
  const Rgb top = lerp(maps.texel(basis, cc.face, x0, y0), maps.texel(basis, cc.face, x1, y0), tx);
  const Rgb bottom =
      lerp(maps.texel(basis, cc.face, x0, y1), maps.texel(basis, cc.face, x1, y1), tx);
  return lerp(top, bottom, ty);
}

AttenuationLut::AttenuationLut(int size, float fill)
    : size_(size), table_(std::size_t(size) * size, fill) {
  if (size < 2) throw std::invalid_argument("attenuation LUT size must be >= 2");
}

double schlick_attenuation(double cos_theta, double metallic) {
  const double k = 1.0 - cos_theta;
  const double k2 = k * k;
  return metallic + (1.0 - metallic) * k2 * k2 * k;
}

double attenuation(const AttenuationLut& lut, double cos_theta, double metallic) {
  const int n = lut.size();
  auto coord = [n](double v) {
    double f = std::clamp(v, 0.0, 1.0) * (n - 1);
    // Snap queries that land on a node up to rounding noise.
    if (const double r = std::round(f); std::abs(f - r) < 1e-9) f = r;
    return f;
  };
  const double fu = coord(cos_theta);
  const double fv = coord(metallic);
  const int u0 = std::min(int(fu), n - 2);
  const int v0 = std::min(int(fv), n - 2);
  const double tu = fu - u0;
  const double tv = fv - v0;
  const double a00 = lut.at(u0, v0);
  const double a10 = lut.at(u0 + 1, v0);
  const double a01 = lut.at(u0, v0 + 1);
  const double a11 = lut.at(u0 + 1, v0 + 1);
  const double top = a00 + (a10 - a00) * tu;
  const double bottom = a01 + (a11 - a01) * tu;
  return top + (bottom - top) * tv;
}

AttenuationLut bake_attenuation_lut(LutKind kind, int size) {
  if (size < 2) throw std::invalid_argument("attenuation LUT size must be >= 2");
  AttenuationLut lut(size);
  for (int v = 0; v < size; ++v) {
    for (int u = 0; u < size; ++u) {
      const double cos_theta = double(u) / (size - 1);
      const double m = double(v) / (size - 1);
      switch (kind) {
        case LutKind::kSchlick:
          lut.set(u, v, float(schlick_attenuation(cos_theta, m)));
          break;
      }
    }
  }
  return lut;
}

CubeMapSet bake_env_maps(const SceneDescription& scene, int edge) {
  CubeMapSet maps(edge);
  for (int face = 0; face < kCubeFaces; ++face) {
    for (int y = 0; y < edge; ++y) {
      for (int x = 0; x < edge; ++x) {
        const Vec3 d = cube_texel_direction(face, x, y, edge);
        for (int b = 0; b < kBasisCount; ++b) maps.set_texel(b, face, x, y, scene.env[b].eval(d));
      }
    }
  }
  return maps;
}

Vec3 reflect(const Vec3& omega_o, const Vec3& n) { return n * (2.0 * dot(omega_o, n)) - omega_o; }

Rgb specular_color(std::span<const double, kBasisCount> weights,
                   std::span<const Rgb, kBasisCount> base_colors) {
  Rgb sum;
  for (int i = 0; i < kBasisCount; ++i) sum += base_colors[i] * weights[i];
  return clamp01(sum);
}

double srgb_encode(double linear) {
  const double c = std::clamp(linear, 0.0, 1.0);
  if (c <= 0.0031308) return 12.92 * c;
  return 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

Rgb tone_map(const Rgb& c) { return {srgb_encode(c.r), srgb_encode(c.g), srgb_encode(c.b)}; }

Rgb shade(const MaterialSample& mat, const Vec3& omega_o, const CubeMapSet& maps,
          const AttenuationLut& lut) {
  const double cos_theta = std::clamp(dot(omega_o, mat.normal), 0.0, 1.0);
  const Vec3 omega_r = reflect(omega_o, mat.normal);
  std::array<Rgb, kBasisCount> bases;
  for (int i = 0; i < kBasisCount; ++i) bases[i] = sample_cubemap(maps, i, omega_r);
  const Rgb specular = specular_color(mat.weights, bases);
  const double a = attenuation(lut, cos_theta, mat.metallic);
  return tone_map(mat.diffuse + mat.tint * (specular * a));
}

}  // namespace vmesh
