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

#include <cmath>
#include <limits>

#include "vmesh/field.hpp"
#include "vmesh/mesher.hpp"

namespace vmesh {

namespace {

// Triangle corners inside a block, in texels from the block origin. The lower triangle keeps a
// 1-texel margin to the block border; the two hypotenuses are 2.5 texels apart along each axis.
constexpr double kBorderInset = 1.0;
constexpr double kDiagonalInset = 3.5;

}  // namespace

AtlasLayout atlas_layout(std::size_t triangle_count, int atlas_size) {
  if (atlas_size < kMinBlockTexels) {
    throw std::invalid_argument("atlas size must be at least " + std::to_string(kMinBlockTexels));
  }
  AtlasLayout layout;
  layout.atlas_size = atlas_size;
  const std::size_t blocks = (triangle_count + 1) / 2;
  int per_row = 1;
  while (std::size_t(per_row) * per_row < blocks) ++per_row;
  layout.blocks_per_row = per_row;
  layout.block_texels = atlas_size / per_row;
  if (layout.block_texels < kMinBlockTexels) {
    throw AtlasCapacityError(int(triangle_count), atlas_size, per_row * kMinBlockTexels);
  }
  return layout;
}

TriMesh parametrize(const TriMesh& mesh, int atlas_size) {
  validate_mesh(mesh);
  if (mesh.has_uvs()) throw std::invalid_argument("parametrize expects a mesh without UVs");
  const AtlasLayout layout = atlas_layout(mesh.triangles.size(), atlas_size);
  TriMesh out = mesh;
  out.uvs.resize(mesh.triangles.size());
  const double s = layout.block_texels;
  const double inv = 1.0 / atlas_size;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const std::size_t block = i / 2;
    const double ox = double(block % layout.blocks_per_row) * s;
    const double oy = double(block / layout.blocks_per_row) * s;
    const double p = kBorderInset;
    const double q = kDiagonalInset;
    std::array<Vec2, 3> corners;
    if (i % 2 == 0) {
      corners = {Vec2{p, p}, Vec2{s - q, p}, Vec2{p, s - q}};
    } else {
      corners = {Vec2{s - p, s - p}, Vec2{q, s - p}, Vec2{s - p, q}};
    }
    for (int k = 0; k < 3; ++k) {
      out.uvs[i][k] = {(ox + corners[k].u) * inv, (oy + corners[k].v) * inv};
    }
  }
  return out;
}

namespace {

struct ClosestPoint {
  double distance;
  double b[3];  // barycentric weights of the closest point
};

ClosestPoint closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b, int ia, int ib) {
  const double dx = b.u - a.u;
  const double dy = b.v - a.v;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.u - a.u) * dx + (p.v - a.v) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double cx = a.u + dx * t - p.u;
  const double cy = a.v + dy * t - p.v;
  ClosestPoint r{std::sqrt(cx * cx + cy * cy), {0.0, 0.0, 0.0}};
  r.b[ia] = 1.0 - t;
  r.b[ib] = t;
  return r;
}

ClosestPoint closest_on_triangle(const Vec2& p, const std::array<Vec2, 3>& t) {
  const double area = (t[1].u - t[0].u) * (t[2].v - t[0].v) - (t[2].u - t[0].u) * (t[1].v - t[0].v);
  if (area != 0.0) {
    const double w0 =
        ((t[1].u - p.u) * (t[2].v - p.v) - (t[2].u - p.u) * (t[1].v - p.v)) / area;
    const double w1 =
        ((t[2].u - p.u) * (t[0].v - p.v) - (t[0].u - p.u) * (t[2].v - p.v)) / area;
    const double w2 = 1.0 - w0 - w1;
    if (w0 >= 0.0 && w1 >= 0.0 && w2 >= 0.0) return {0.0, {w0, w1, w2}};
  }
  ClosestPoint best = closest_on_segment(p, t[0], t[1], 0, 1);
  for (const ClosestPoint& c :
       {closest_on_segment(p, t[1], t[2], 1, 2), closest_on_segment(p, t[2], t[0], 2, 0)}) {
    if (c.distance < best.distance) best = c;
  }
  return best;
}

}  // namespace

TextureMaps bake_textures(const TriMesh& mesh, const SceneDescription& scene, int size) {
  validate_mesh(mesh);
  if (!mesh.has_uvs() && !mesh.triangles.empty()) {
    throw std::invalid_argument("bake_textures needs a parametrized mesh");
  }
  if (size < 1) throw std::invalid_argument("texture size must be positive");
  const std::size_t texels = std::size_t(size) * size;
  TextureMaps maps;
  maps.size = size;
  maps.normal.assign(texels * 3, 0.0f);
  maps.diffuse.assign(texels * 3, 0.0f);
  maps.tint.assign(texels * 3, 0.0f);
  maps.weights.assign(texels * 4, 0.0f);
  maps.metallic.assign(texels, 0.0f);
  maps.state.assign(texels, TexelState::kEmpty);

  // Nearest triangle per texel within the gutter band; ties go to the lower triangle index.
  std::vector<int> owner(texels, -1);
  std::vector<double> owner_dist(texels, std::numeric_limits<double>::infinity());
  std::vector<std::array<double, 3>> owner_bary(texels);
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    std::array<Vec2, 3> uv;
    double lo_u = std::numeric_limits<double>::infinity(), lo_v = lo_u;
    double hi_u = -lo_u, hi_v = -lo_u;
    for (int k = 0; k < 3; ++k) {
      uv[k] = {mesh.uvs[f][k].u * size, mesh.uvs[f][k].v * size};
      lo_u = std::min(lo_u, uv[k].u);
      hi_u = std::max(hi_u, uv[k].u);
      lo_v = std::min(lo_v, uv[k].v);
      hi_v = std::max(hi_v, uv[k].v);
    }
    const int x0 = std::max(0, int(std::floor(lo_u - kGutterTexels)));
    const int x1 = std::min(size - 1, int(std::ceil(hi_u + kGutterTexels)));
    const int y0 = std::max(0, int(std::floor(lo_v - kGutterTexels)));
    const int y1 = std::min(size - 1, int(std::ceil(hi_v + kGutterTexels)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const ClosestPoint c = closest_on_triangle({x + 0.5, y + 0.5}, uv);
        if (c.distance > kGutterTexels) continue;
        const std::size_t idx = std::size_t(y) * size + x;
        if (c.distance < owner_dist[idx]) {
          owner_dist[idx] = c.distance;
          owner[idx] = int(f);
          owner_bary[idx] = {c.b[0], c.b[1], c.b[2]};
        }
      }
    }
  }

  for (std::size_t idx = 0; idx < texels; ++idx) {
    if (owner[idx] < 0) continue;
    const Triangle& t = mesh.triangles[owner[idx]];
    const auto& b = owner_bary[idx];
    const Vec3 x = mesh.vertices[t[0]] * b[0] + mesh.vertices[t[1]] * b[1] +
                   mesh.vertices[t[2]] * b[2];
    const FieldSample s = sample_field(scene, x);
    maps.state[idx] = owner_dist[idx] == 0.0 ? TexelState::kCovered : TexelState::kGutter;
    for (int c = 0; c < 3; ++c) {
      maps.normal[idx * 3 + c] = float(0.5 * (s.normal[c] + 1.0));
      maps.diffuse[idx * 3 + c] = float(s.diffuse[c]);
      maps.tint[idx * 3 + c] = float(s.tint[c]);
    }
    for (int c = 0; c < kBasisCount; ++c) maps.weights[idx * 4 + c] = float(s.weights[c]);
    maps.metallic[idx] = float(s.metallic);
  }
  return maps;
}

}  // namespace vmesh
