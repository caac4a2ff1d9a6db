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
#include <optional>

#include "doctest.h"
#include "test_util.hpp"
#include "vmesh/raster.hpp"
#include "vmesh/renderer.hpp"

using namespace vmesh;

namespace {

// Moller-Trumbore; two-sided.
std::optional<double> ray_triangle(const Ray& r, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 p = cross(r.direction, e2);
  const double det = dot(e1, p);
  if (std::abs(det) < 1e-14) return std::nullopt;
  const Vec3 s = r.origin - a;
  const double u = dot(s, p) / det;
  if (u < 0 || u > 1) return std::nullopt;
  const Vec3 q = cross(s, e1);
  const double v = dot(r.direction, q) / det;
  if (v < 0 || u + v > 1) return std::nullopt;
  const double t = dot(e2, q) / det;
  if (t <= 0) return std::nullopt;
  return t;
}

CameraPose front_camera(double d, int size) {
  CameraPose cam;
  cam.position = {0.05, -0.02, d};
  cam.look_at = {0.05, -0.02, 0};
  cam.width = cam.height = size;
  return cam;
}

const BakeResult& mesh_only() {
  static const BakeResult r = test::small_bake("mesh_only.scene");
  return r;
}

const BakeResult& volume_only() {
  static const BakeResult r = test::small_bake("volume_only.scene");
  return r;
}

}  // namespace

TEST_CASE("empty mesh covers nothing") {
  CameraPose cam = front_camera(2.5, 16);
  for (const RasterHit& h : rasterize_triangles(TriMesh{}, cam)) CHECK_FALSE(h.covered());
  const Renderer r(volume_only().assets);
  REQUIRE(r.assets().mesh.triangles.empty());
  for (const GBufferTexel& t : r.rasterize_mesh(cam).texels) CHECK_FALSE(t.covered);
}

TEST_CASE("screen-spanning triangle depth matches a ray-triangle oracle") {
  const double d = 1.7;
  TriMesh m;
  m.vertices = {{-3, -3, 0}, {4, -2, 0}, {-1, 5, 0}};
  m.triangles = {{0, 1, 2}};
  const CameraPose cam = front_camera(d, 48);
  const auto hits = rasterize_triangles(m, cam);
  const Vec3 axis = normalize(cam.look_at - cam.position);
  int covered = 0;
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const Ray ray = camera_ray(cam, x, y);
      const auto t = ray_triangle(ray, m.vertices[0], m.vertices[1], m.vertices[2]);
      const RasterHit& h = hits[std::size_t(y) * cam.width + x];
      REQUIRE(t.has_value());
      REQUIRE(h.covered());
      ++covered;
      CHECK(std::abs(h.t - *t) <= 1e-4);
      CHECK(std::abs(h.t - d / dot(ray.direction, axis)) <= 1e-4);
      CHECK(h.bary[0] + h.bary[1] + h.bary[2] == doctest::Approx(1.0));
    }
  }
  CHECK(covered == 48 * 48);
}

TEST_CASE("back faces are culled and the nearer triangle wins") {
  TriMesh m;
  m.vertices = {{-3, -3, 0}, {3, -3, 0}, {0, 3, 0}, {-3, -3, 0.4}, {3, -3, 0.4}, {0, 3, 0.4}};
  m.triangles = {{0, 1, 2}, {3, 4, 5}};
  const CameraPose cam = front_camera(2.0, 24);
  for (const RasterHit& h : rasterize_triangles(m, cam)) {
    if (h.covered()) CHECK(h.triangle == 1);
  }
  m.triangles = {{3, 4, 5}, {0, 1, 2}};
  for (const RasterHit& h : rasterize_triangles(m, cam)) {
    if (h.covered()) CHECK(h.triangle == 0);
  }
  m.triangles = {{0, 2, 1}};
  for (const RasterHit& h : rasterize_triangles(m, cam)) CHECK_FALSE(h.covered());
}

TEST_CASE("march interval rules") {
  const Renderer r(mesh_only().assets);
  const Ray ray{{0.2, 0.1, 3.0}, {0, 0, -1}};
  GBufferTexel open;
  auto span = r.march_interval(ray, open);
  REQUIRE(span);
  CHECK(span->t_near == doctest::Approx(2.0));
  CHECK(span->t_far == doctest::Approx(4.0));
  GBufferTexel hit;
  hit.covered = true;
  hit.t = 2.6;
  span = r.march_interval(ray, hit);
  REQUIRE(span);
  CHECK(span->t_far == 2.6);
  span = r.march_interval({{0, 0, 0}, {0, 1, 0}}, open);
  REQUIRE(span);
  CHECK(span->t_near == 0.0);
  CHECK_FALSE(r.march_interval({{0, 3, 3}, {0, 0, 1}}, open));
}

TEST_CASE("raymarch of an empty volume or interval is zero") {
  RenderConfig cfg;
  const Renderer mesh(mesh_only().assets);
  const Ray ray{{0, 0, 3}, {0, 0, -1}};
  auto v = mesh.raymarch_volume(ray, 2.0, 4.0, cfg);
  CHECK(v.opacity == 0.0);
  CHECK(v.color == Rgb{});
  const Renderer vol(volume_only().assets);
  v = vol.raymarch_volume(ray, 3.0, 3.0, cfg);
  CHECK(v.opacity == 0.0);
  CHECK(v.color == Rgb{});
}

TEST_CASE("composite examples") {
  const Rgba bg{0.1f, 0.2f, 0.3f, 0.5f};
  CHECK(composite({0, 0, 0}, 0.0, {0.4, 0.5, 0.6}, true, bg) == Rgba{0.4f, 0.5f, 0.6f, 1.0f});
  CHECK(composite({0.7, 0.1, 0.2}, 1.0, {0.4, 0.5, 0.6}, true, bg) == Rgba{0.7f, 0.1f, 0.2f, 1.0f});
  const Rgba c = composite({0.2, 0.2, 0.2}, 0.5, {0.6, 0.6, 0.6}, true, bg);
  CHECK(c.r == doctest::Approx(0.5));
  const Rgba u = composite({0.2, 0.2, 0.2}, 0.5, {}, false, bg);
  CHECK(u.r == doctest::Approx(0.25));
  CHECK(u.a == doctest::Approx(0.75));
  CHECK(composite({}, 0.0, {}, false, Rgba{}) == Rgba{});
}

TEST_CASE("mesh-only frame equals the G-buffer shade") {
  const Renderer r(mesh_only().assets);
  RenderConfig cfg;
  cfg.background = {0.1f, 0.2f, 0.3f, 1.0f};
  const CameraPose cam = camera_ring(3, 2.5, 25, 50, 40, 40)[1];
  const ImageRGBA im = r.render_frame(cam, cfg);
  const GBuffer g = r.rasterize_mesh(cam);
  int covered = 0;
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const GBufferTexel& t = g.at(x, y);
      if (!t.covered) {
        CHECK(im.at(x, y) == cfg.background);
        continue;
      }
      ++covered;
      const Rgb s = shade(t.material, -camera_ray(cam, x, y).direction, r.appearance().maps, r.appearance().lut);
      CHECK(im.at(x, y) == Rgba{float(s.r), float(s.g), float(s.b), 1.0f});
    }
  }
  CHECK(covered > 100);
}

TEST_CASE("volume-only frame equals raymarch over the background") {
  const Renderer r(volume_only().assets);
  RenderConfig cfg;
  cfg.background = {0.0f, 0.0f, 0.2f, 1.0f};
  const CameraPose cam = camera_ring(3, 2.5, 25, 50, 32, 32)[2];
  const ImageRGBA im = r.render_frame(cam, cfg);
  double opacity = 0.0;
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const Ray ray = camera_ray(cam, x, y);
      VolumeResult v;
      if (const auto span = ray_box_intersect(ray, r.assets().bounds)) {
        v = r.raymarch_volume(ray, span->t_near, span->t_far, cfg);
      }
      opacity += v.opacity;
      CHECK(im.at(x, y) == composite(v.color, v.opacity, {}, false, cfg.background));
    }
  }
  CHECK(opacity > 1.0);
}

TEST_CASE("baked slab opacity follows Beer-Lambert") {
  BakeOptions o = test::small_bake_options();
  o.grid_n = 128;
  o.block_b = 16;
  o.prune_threshold = 0.0;
  o.cameras = load_camera_path(test::source_dir() / "scenes" / "slab_view.cams");
  const SceneDescription scene = load_scene(test::source_dir() / "scenes" / "slab.scene");
  const BakeResult b = bake(scene, o);
  const Renderer r(b.assets);
  const double sigma = scene.volume[0].density;
  const CameraPose& cam = o.cameras[0];
  RenderConfig cfg;
  cfg.early_stop_transmittance = 0.0;
  double worst = 0.0;
  int rays = 0;
  for (int y = 0; y < cam.height; y += 3) {
    for (int x = 0; x < cam.width; x += 3) {
      const Ray ray = camera_ray(cam, x, y);
      const auto box = ray_box_intersect(ray, scene.bounds);
      if (!box) continue;
      // Only rays crossing both slab faces inside the box; the path is then 0.25 / |dy|.
      const double ty0 = (0.0 - ray.origin.y) / ray.direction.y;
      const double ty1 = (0.25 - ray.origin.y) / ray.direction.y;
      if (!ray_box_intersect({ray.at(ty0), ray.direction}, scene.bounds) ||
          std::min(ty0, ty1) < box->t_near || std::max(ty0, ty1) > box->t_far) {
        continue;
      }
      const double len = std::abs(ty1 - ty0);
      const double expect = -std::expm1(-sigma * len);
      const double got = r.raymarch_volume(ray, box->t_near, box->t_far, cfg).opacity;
      worst = std::max(worst, std::abs(got - expect) / expect);
      ++rays;
    }
  }
  CHECK(rays > 500);
  CHECK(worst <= 0.01);
}

TEST_CASE("rendering is deterministic") {
  const BakeResult b = test::small_bake("hybrid_demo.scene");
  const CameraPose cam = camera_ring(2, 2.5, 25, 50, 32, 32)[0];
  CHECK(render_frame(b.assets, cam) == render_frame(b.assets, cam));
  CHECK(Renderer(b.assets).render_frame(cam) == render_frame(b.assets, cam));
}

TEST_CASE("render config validation") {
  RenderConfig cfg;
  cfg.step_scale = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg = {};
  cfg.early_stop_transmittance = 1.0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}
