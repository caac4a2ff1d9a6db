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

#include "vmesh/raster.hpp"

#include <algorithm>
#include <cmath>

namespace vmesh {

namespace {

constexpr double kNearPlane = 1e-6;

struct P2 {
  double x;
  double y;
};

bool lex_less(const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Edge function evaluated with a canonical endpoint order so that a shared edge yields exactly
// opposite values for its two triangles.
double edge_fn(const P2& a, const P2& b, const P2& p) {
  if (lex_less(b, a)) return -edge_fn(b, a, p);
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

// Top-left rule for a triangle with positive edge-function orientation in y-down pixel space.
bool owns_edge(const P2& a, const P2& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return dy < 0.0 || (dy == 0.0 && dx > 0.0);
}

void write_hit(RasterHit& slot, int tri, const Ray& ray, const Vec3& a, const Vec3& b,
               const Vec3& c) {
  const Vec3 n = cross(b - a, c - a);
  const double denom = dot(n, ray.direction);
  if (denom == 0.0) return;
  const double t = dot(n, a - ray.origin) / denom;
  if (!(t > 0.0)) return;
  if (slot.covered() && !(t < slot.t)) return;
  const Vec3 x = ray.at(t);
  const double n2 = dot(n, n);
  double w0 = dot(cross(c - b, x - b), n) / n2;
  double w1 = dot(cross(a - c, x - c), n) / n2;
  w0 = std::clamp(w0, 0.0, 1.0);
  w1 = std::clamp(w1, 0.0, 1.0 - w0);
  slot.triangle = tri;
  slot.t = t;
  slot.bary = {w0, w1, 1.0 - w0 - w1};
}

}  // namespace

std::vector<RasterHit> rasterize_triangles(const TriMesh& mesh, const CameraPose& cam) {
  validate_camera(cam);
  const CameraFrame frame = camera_frame(cam);
  const int w = cam.width;
  const int h = cam.height;
  std::vector<RasterHit> hits(std::size_t(w) * h);

  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    const Triangle& tri = mesh.triangles[f];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const Vec3 n = cross(b - a, c - a);
    if (!(dot(n, cam.position - a) > 0.0)) continue;  // back face or edge-on

    std::array<P2, 3> p;
    bool all_in_front = true;
    const Vec3* corners[3] = {&a, &b, &c};
    for (int k = 0; k < 3; ++k) {
      const Vec3 d = *corners[k] - cam.position;
      const double z = dot(d, frame.forward);
      if (z < kNearPlane) {
        all_in_front = false;
        break;
      }
      const double sx = dot(d, frame.right) / (z * frame.tan_half_fov * frame.aspect);
      const double sy = dot(d, frame.up) / (z * frame.tan_half_fov);
      p[k] = {0.5 * (sx + 1.0) * w, 0.5 * (1.0 - sy) * h};
    }

    if (!all_in_front) {
      // Crosses the near plane: test every pixel ray directly.
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const Ray ray = camera_ray(cam, frame, x, y);
          const double denom = dot(n, ray.direction);
          if (denom == 0.0) continue;
          const double t = dot(n, a - ray.origin) / denom;
          if (!(t > 0.0)) continue;
          const Vec3 q = ray.at(t);
          if (dot(cross(b - a, q - a), n) < 0.0 || dot(cross(c - b, q - b), n) < 0.0 ||
              dot(cross(a - c, q - c), n) < 0.0) {
            continue;
          }
          write_hit(hits[std::size_t(y) * w + x], int(f), ray, a, b, c);
        }
      }
      continue;
    }

    double area = edge_fn(p[0], p[1], p[2]);
    if (area == 0.0) continue;
    if (area < 0.0) std::swap(p[1], p[2]);
    const double lo_x = std::min({p[0].x, p[1].x, p[2].x});
    const double hi_x = std::max({p[0].x, p[1].x, p[2].x});
    const double lo_y = std::min({p[0].y, p[1].y, p[2].y});
    const double hi_y = std::max({p[0].y, p[1].y, p[2].y});
    const int x0 = std::max(0, int(std::floor(lo_x - 0.5)));
    const int x1 = std::min(w - 1, int(std::ceil(hi_x - 0.5)));
    const int y0 = std::max(0, int(std::floor(lo_y - 0.5)));
    const int y1 = std::min(h - 1, int(std::ceil(hi_y - 0.5)));
    const bool own[3] = {owns_edge(p[1], p[2]), owns_edge(p[2], p[0]), owns_edge(p[0], p[1])};
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const P2 q{x + 0.5, y + 0.5};
        const double e[3] = {edge_fn(p[1], p[2], q), edge_fn(p[2], p[0], q),
                             edge_fn(p[0], p[1], q)};
        bool inside = true;
        for (int k = 0; k < 3 && inside; ++k) inside = e[k] > 0.0 || (e[k] == 0.0 && own[k]);
        if (!inside) continue;
        write_hit(hits[std::size_t(y) * w + x], int(f), camera_ray(cam, frame, x, y), a, b, c);
      }
    }
  }
  return hits;
}

}  // namespace vmesh
