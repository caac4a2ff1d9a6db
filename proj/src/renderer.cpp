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

#include "vmesh/renderer.hpp"

#include <cmath>
#include <stdexcept>

namespace vmesh {

void validate_config(const RenderConfig& cfg) {
  if (!(cfg.step_scale > 0.0 && cfg.step_scale <= 1.0)) {
    throw std::invalid_argument("step_scale must be in (0, 1]");
  }
  if (!(cfg.early_stop_transmittance >= 0.0 && cfg.early_stop_transmittance < 1.0)) {
    throw std::invalid_argument("early_stop_transmittance must be in [0, 1)");
  }
}

namespace {

std::array<float, 256> decode_table(const ChannelRange& r) {
  std::array<float, 256> t{};
  for (int q = 0; q < 256; ++q) t[q] = float(dequantize(std::uint8_t(q), r.min, r.max));
  return t;
}

// Texture channel order in tex_decode_: normal 0-2, diffuse 3-5, tint 6-8, weights 9-12, metal 13.
constexpr int kTexNormal = 0;
constexpr int kTexDiffuse = 3;
constexpr int kTexTint = 6;
constexpr int kTexWeights = 9;
constexpr int kTexMetal = 13;

Vec3 decode_normal(const Vec3& encoded, const Vec3& fallback) {
  const Vec3 n = encoded * 2.0 - Vec3{1.0, 1.0, 1.0};
  const double len = length(n);
  return len > 1e-6 ? n / len : fallback;
}

}  // namespace

Renderer::Renderer(const VMeshAssets& assets)
    : assets_(&assets), appearance_(decode_appearance(assets)) {
  const std::pair<const QuantizedImage*, int> tex[] = {{&assets.tex_normal, kTexNormal},
                                                       {&assets.tex_diffuse, kTexDiffuse},
                                                       {&assets.tex_tint, kTexTint},
                                                       {&assets.tex_weights, kTexWeights},
                                                       {&assets.tex_metal, kTexMetal}};
  for (const auto& [q, base] : tex) {
    for (std::size_t c = 0; c < q->ranges.size(); ++c) tex_decode_[base + c] = decode_table(q->ranges[c]);
  }
  const VolumeAssets& v = assets.volume;
  if (!v.empty()) {
    // Volume channel order: density, metallic, normal 2-4, diffuse 5-7, tint 8-10, weights 11-14.
    vol_decode_[0] = decode_table(v.density_metal.ranges[0]);
    vol_decode_[1] = decode_table(v.density_metal.ranges[1]);
    for (int c = 0; c < 3; ++c) {
      vol_decode_[2 + c] = decode_table(v.normal.ranges[c]);
      vol_decode_[5 + c] = decode_table(v.diffuse.ranges[c]);
      vol_decode_[8 + c] = decode_table(v.tint.ranges[c]);
    }
    for (int c = 0; c < 4; ++c) vol_decode_[11 + c] = decode_table(v.weights.ranges[c]);
  }
}

MaterialSample Renderer::fetch_surface(const Vec2& uv) const {
  const int size = assets_->atlas_size();
  const double fx = uv.u * size - 0.5;
  const double fy = uv.v * size - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double tx = fx - x0f;
  const double ty = fy - y0f;
  const int xs[2] = {std::clamp(int(x0f), 0, size - 1), std::clamp(int(x0f) + 1, 0, size - 1)};
  const int ys[2] = {std::clamp(int(y0f), 0, size - 1), std::clamp(int(y0f) + 1, 0, size - 1)};
  const double wx[2] = {1.0 - tx, tx};
  const double wy[2] = {1.0 - ty, ty};

  double ch[14] = {};
  auto accumulate = [&](const QuantizedImage& q, int base) {
    const int channels = q.image.channels;
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 2; ++i) {
        const double w = wx[i] * wy[j];
        if (w == 0.0) continue;
        for (int c = 0; c < channels; ++c) {
          ch[base + c] += w * tex_decode_[base + c][q.image.at(xs[i], ys[j], c)];
        }
      }
    }
  };
  accumulate(assets_->tex_normal, kTexNormal);
  accumulate(assets_->tex_diffuse, kTexDiffuse);
  accumulate(assets_->tex_tint, kTexTint);
  accumulate(assets_->tex_weights, kTexWeights);
  accumulate(assets_->tex_metal, kTexMetal);

  MaterialSample m;
  m.normal = {ch[kTexNormal], ch[kTexNormal + 1], ch[kTexNormal + 2]};
  m.diffuse = {ch[kTexDiffuse], ch[kTexDiffuse + 1], ch[kTexDiffuse + 2]};
  m.tint = {ch[kTexTint], ch[kTexTint + 1], ch[kTexTint + 2]};
  for (int c = 0; c < kBasisCount; ++c) m.weights[c] = ch[kTexWeights + c];
  m.metallic = ch[kTexMetal];
  return m;
}

GBuffer Renderer::rasterize_mesh(const CameraPose& cam) const {
  GBuffer g;
  g.width = cam.width;
  g.height = cam.height;
  g.texels.resize(std::size_t(cam.width) * cam.height);
  const TriMesh& mesh = assets_->mesh;
  if (mesh.triangles.empty()) return g;
  const std::vector<RasterHit> hits = rasterize_triangles(mesh, cam);
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const RasterHit& h = hits[i];
    if (!h.covered()) continue;
    const TriangleUv& uv = mesh.uvs[h.triangle];
    const Vec2 p{h.bary[0] * uv[0].u + h.bary[1] * uv[1].u + h.bary[2] * uv[2].u,
                 h.bary[0] * uv[0].v + h.bary[1] * uv[1].v + h.bary[2] * uv[2].v};
    GBufferTexel& t = g.texels[i];
    t.covered = true;
    t.t = h.t;
    t.material = fetch_surface(p);
    t.normal = decode_normal(t.material.normal, triangle_normal(mesh, h.triangle));
    t.material.normal = t.normal;
  }
  return g;
}

std::optional<Interval> Renderer::march_interval(const Ray& ray, const GBufferTexel& texel) const {
  auto box = ray_box_intersect(ray, assets_->bounds);
  if (!box) return std::nullopt;
  if (texel.covered) box->t_far = std::min(box->t_far, texel.t);
  return box;
}

std::optional<VoxelRecord> Renderer::fetch_voxel(const IVec3& voxel) const {
  const VolumeAssets& v = assets_->volume;
  if (v.empty()) return std::nullopt;
  const int n = v.grid_n;
  const std::size_t bit = std::size_t(voxel.x) + n * (std::size_t(voxel.y) + n * std::size_t(voxel.z));
  if (!occupancy_bit(v.occupancy, bit)) return std::nullopt;
  const int b = v.block_b;
  const IVec3 slot = psh_lookup(v.psh, block_of(voxel, b));
  const int d = v.atlas_dim();
  const int ax = slot.x * b + voxel.x % b;
  const int ay = slot.y * b + voxel.y % b + d * (slot.z * b + voxel.z % b);
  VoxelRecord r;
  r.density = vol_decode_[0][v.density_metal.image.at(ax, ay, 0)];
  r.metallic = vol_decode_[1][v.density_metal.image.at(ax, ay, 1)];
  const Vec3 enc{vol_decode_[2][v.normal.image.at(ax, ay, 0)],
                 vol_decode_[3][v.normal.image.at(ax, ay, 1)],
                 vol_decode_[4][v.normal.image.at(ax, ay, 2)]};
  r.normal = decode_normal(enc, {0.0, 0.0, 1.0});
  for (int c = 0; c < 3; ++c) {
    r.diffuse[c] = vol_decode_[5 + c][v.diffuse.image.at(ax, ay, c)];
    r.tint[c] = vol_decode_[8 + c][v.tint.image.at(ax, ay, c)];
  }
  for (int c = 0; c < kBasisCount; ++c) r.weights[c] = vol_decode_[11 + c][v.weights.image.at(ax, ay, c)];
  return r;
}

VolumeResult Renderer::raymarch_volume(const Ray& ray, double t_start, double t_end,
                                       const RenderConfig& cfg) const {
  VolumeResult out;
  const VolumeAssets& v = assets_->volume;
  if (v.empty() || !(t_end > t_start)) return out;
  const Aabb& bounds = assets_->bounds;
  const double edge = (bounds.max.x - bounds.min.x) / v.grid_n;
  const double step = edge * cfg.step_scale;
  const Vec3 omega_o = -ray.direction;
  double transmittance = 1.0;
  for (long long i = 0;; ++i) {
    const double a = t_start + step * double(i);
    if (!(a < t_end)) break;
    const double b = std::min(a + step, t_end);
    const double delta = b - a;
    const Vec3 x = ray.at(0.5 * (a + b));
    IVec3 voxel;
    int* out_axis[3] = {&voxel.x, &voxel.y, &voxel.z};
    for (int k = 0; k < 3; ++k) {
      const double f = std::floor((x[k] - bounds.min[k]) / edge);
      *out_axis[k] = int(std::clamp(f, 0.0, double(v.grid_n - 1)));
    }
    const auto rec = fetch_voxel(voxel);
    if (!rec || rec->density <= 0.0) continue;
    const double alpha = -std::expm1(-rec->density * delta);
    if (alpha <= 0.0) continue;
    const double w = transmittance * alpha;
    const MaterialSample m{rec->diffuse, rec->tint, rec->weights, rec->metallic, rec->normal};
    out.color += shade(m, omega_o, appearance_.maps, appearance_.lut) * w;
    out.opacity += w;
    transmittance *= 1.0 - alpha;
    if (transmittance < cfg.early_stop_transmittance) break;
  }
  return out;
}

Rgba composite(const Rgb& c_vol, double m_vol, const Rgb& c_mesh, bool covered,
               const Rgba& background) {
  const double k = 1.0 - m_vol;
  if (covered) {
    const Rgb c = c_vol + c_mesh * k;
    return {float(c.r), float(c.g), float(c.b), 1.0f};
  }
  const Rgb c = c_vol + Rgb{background.r, background.g, background.b} * k;
  return {float(c.r), float(c.g), float(c.b), float(m_vol + k * background.a)};
}

ImageRGBA Renderer::render_frame(const CameraPose& cam, const RenderConfig& cfg) const {
  validate_config(cfg);
  validate_camera(cam);
  const GBuffer g = rasterize_mesh(cam);
  const CameraFrame frame = camera_frame(cam);
  ImageRGBA image(cam.width, cam.height);
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const Ray ray = camera_ray(cam, frame, x, y);
      const GBufferTexel& texel = g.at(x, y);
      Rgb c_mesh;
      if (texel.covered) c_mesh = shade(texel.material, -ray.direction, appearance_.maps, appearance_.lut);
      VolumeResult vol;
      if (const auto span = march_interval(ray, texel)) {
        vol = raymarch_volume(ray, span->t_near, span->t_far, cfg);
      }
      image.at(x, y) = composite(vol.color, vol.opacity, c_mesh, texel.covered, cfg.background);
    }
  }
  return image;
}

ImageRGBA render_frame(const VMeshAssets& assets, const CameraPose& cam, const RenderConfig& cfg) {
  return Renderer(assets).render_frame(cam, cfg);
}

}  // namespace vmesh
