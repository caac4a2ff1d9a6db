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

#include "doctest.h"
#include "mesh_oracles.hpp"
#include "vmesh/mesh.hpp"
#include "vmesh/mesher.hpp"
#include "vmesh/scene.hpp"

using namespace vmesh;

namespace {

double signed_volume(const TriMesh& m) {
  double v = 0.0;
  for (const auto& t : m.triangles) {
    v += dot(m.vertices[t[0]], cross(m.vertices[t[1]], m.vertices[t[2]])) / 6.0;
  }
  return v;
}

}  // namespace

TEST_CASE("sphere extraction is closed and outward") {
  auto sphere = [](const Vec3& x) { return length(x) - 0.6; };
  const TriMesh m = marching_cubes(sphere, Aabb{}, 64);
  const MeshTopology topo = mesh_topology(m);
  CHECK(topo.watertight());
  CHECK(topo.euler_characteristic() == 2);
  const double v = signed_volume(m);
  CHECK(v == doctest::Approx(4.0 / 3.0 * M_PI * 0.216).epsilon(0.02));
}

TEST_CASE("torus extraction has genus one") {
  auto torus = [](const Vec3& x) {
    const double q = std::hypot(x.x, x.z) - 0.5;
    return std::hypot(q, x.y) - 0.2;
  };
  const TriMesh m = marching_cubes(torus, Aabb{}, 48);
  const MeshTopology topo = mesh_topology(m);
  CHECK(topo.watertight());
  CHECK(topo.euler_characteristic() == 0);
  CHECK(signed_volume(m) > 0.0);
}


TEST_CASE("simplified sphere stays within two cells") {
  auto sphere = [](const Vec3& x) { return length(x) - 0.6; };
  const TriMesh m = marching_cubes(sphere, Aabb{}, 32);
  const TriMesh s = simplify(m, 0.25);
  CHECK(s.triangles.size() <= m.triangles.size() / 4);
  CHECK(mesh_topology(s).watertight());
  CHECK(mesh_topology(s).euler_characteristic() == 2);
  const double cell = 2.0 / 32;
  CHECK(test::hausdorff(m, s) <= 2.0 * cell);
}

namespace {

const char* kPlainScene = R"(scene {
  sharpness 400
  surface {
    primitive sphere center 0 0 0 radius 0.5
  }
  material {
    diffuse constant 0.25 0.5 0.75
    tint constant 0.1 0.2 0.3
    weights constant 0.4 0.3 0.2 0.1
    metallic constant 0.6
  }
  env {
    map 0 constant 1 1 1
    map 1 constant 1 1 1
    map 2 constant 1 1 1
    map 3 constant 1 1 1
  }
}
)";

// Dense (n x n quads) triangulation of the unit square in the z = 0.25 plane, facing +z.
TriMesh flat_square(int n) {
  TriMesh m;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) m.vertices.push_back({double(i) / n, double(j) / n, 0.25});
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

// Barycentric coordinates of p in the 2D triangle abc.
std::array<double, 3> barycentric(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  const double d = (b.v - c.v) * (a.u - c.u) + (c.u - b.u) * (a.v - c.v);
  const double l0 = ((b.v - c.v) * (p.u - c.u) + (c.u - b.u) * (p.v - c.v)) / d;
  const double l1 = ((c.v - a.v) * (p.u - c.u) + (a.u - c.u) * (p.v - c.v)) / d;
  return {l0, l1, 1.0 - l0 - l1};
}

}  // namespace

TEST_CASE("positive field gives an empty mesh") {
  const TriMesh m = marching_cubes([](const Vec3&) { return 1.0; }, Aabb{}, 16);
  CHECK(m.vertices.empty());
  CHECK(m.triangles.empty());
}

TEST_CASE("sphere vertices lie within a cell of the surface") {
  const SceneDescription s = parse_scene(kPlainScene);
  const TriMesh m = marching_cubes(s, 64);
  const MeshTopology topo = mesh_topology(m);
  CHECK(topo.watertight());
  CHECK(topo.euler_characteristic() == 2);
  double worst = 0.0;
  for (const Vec3& v : m.vertices) worst = std::max(worst, std::abs(length(v) - 0.5));
  CHECK(worst <= 2.0 / 64.0 * 0.85);
  for (std::size_t f = 0; f < m.triangles.size(); ++f) CHECK(triangle_area(m, int(f)) >= kDegenerateArea);
}

TEST_CASE("simplify with ratio one leaves the mesh unchanged") {
  const TriMesh m = marching_cubes([](const Vec3& x) { return length(x) - 0.4; }, Aabb{}, 16);
  CHECK(simplify(m, 1.0) == m);
}

TEST_CASE("simplified flat square stays planar") {
  const TriMesh square = flat_square(20);
  const TriMesh out = simplify(square, 0.1);
  CHECK(out.triangles.size() < square.triangles.size() / 2);
  CHECK(mesh_topology(out).boundary_edges == 80);
  for (const Triangle& t : out.triangles) {
    for (int k : t) CHECK(out.vertices[k].z == 0.25);
  }
  for (std::size_t f = 0; f < out.triangles.size(); ++f) {
    CHECK(triangle_normal(out, int(f)).z == doctest::Approx(1.0));
  }
}

TEST_CASE("parametrize a single triangle") {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}};
  const TriMesh p = parametrize(m, 64);
  REQUIRE(p.uvs.size() == 1);
  for (const Vec2& uv : p.uvs[0]) {
    CHECK(uv.u >= 0.0);
    CHECK(uv.u <= 1.0);
    CHECK(uv.v >= 0.0);
    CHECK(uv.v <= 1.0);
  }
  const AtlasLayout layout = atlas_layout(1, 64);
  CHECK(layout.blocks_per_row == 1);
  CHECK(layout.block_texels == 64);
}

TEST_CASE("packed UV triangles never share a texel") {
  const TriMesh m = simplify(marching_cubes([](const Vec3& x) { return length(x) - 0.6; }, Aabb{}, 24), 0.5);
  const int size = 256;
  const TriMesh p = parametrize(m, size);
  std::vector<int> claim(std::size_t(size) * size, -1);
  int overlaps = 0;
  for (std::size_t f = 0; f < p.triangles.size(); ++f) {
    std::array<Vec2, 3> uv;
    for (int k = 0; k < 3; ++k) uv[k] = {p.uvs[f][k].u * size, p.uvs[f][k].v * size};
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const auto b = barycentric({x + 0.5, y + 0.5}, uv[0], uv[1], uv[2]);
        if (b[0] < 0 || b[1] < 0 || b[2] < 0) continue;
        int& c = claim[std::size_t(y) * size + x];
        if (c >= 0) ++overlaps;
        c = int(f);
      }
    }
  }
  CHECK(overlaps == 0);
}

TEST_CASE("atlas capacity error reports a sufficient size") {
  const std::size_t faces = 300;
  try {
    atlas_layout(faces, 64);
    FAIL("expected a capacity error");
  } catch (const AtlasCapacityError& e) {
    const int need = e.required_size();
    CHECK(need > 64);
    CHECK_NOTHROW(atlas_layout(faces, need));
    CHECK_THROWS_AS(atlas_layout(faces, need - 1), AtlasCapacityError);
  }
  TriMesh m = flat_square(11);  // 242 triangles
  CHECK_THROWS_AS(parametrize(m, 64), AtlasCapacityError);
}

TEST_CASE("baked maps of a constant material sphere") {
  const SceneDescription s = parse_scene(kPlainScene);
  const TriMesh mesh = parametrize(simplify(marching_cubes(s, 24), 0.5), 256);
  const TextureMaps maps = bake_textures(mesh, s, 256);
  const int size = maps.size;
  int covered = 0;
  double worst_normal = 0.0;
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    std::array<Vec2, 3> uv;
    for (int k = 0; k < 3; ++k) uv[k] = {mesh.uvs[f][k].u * size, mesh.uvs[f][k].v * size};
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const auto b = barycentric({x + 0.5, y + 0.5}, uv[0], uv[1], uv[2]);
        if (b[0] < 1e-6 || b[1] < 1e-6 || b[2] < 1e-6) continue;
        const std::size_t idx = std::size_t(y) * size + x;
        REQUIRE(maps.state[idx] == TexelState::kCovered);
        ++covered;
        const Triangle& t = mesh.triangles[f];
        const Vec3 p = mesh.vertices[t[0]] * b[0] + mesh.vertices[t[1]] * b[1] + mesh.vertices[t[2]] * b[2];
        const Vec3 n = normalize(p);
        for (int c = 0; c < 3; ++c) {
          worst_normal = std::max(worst_normal, std::abs(2.0 * maps.normal[idx * 3 + c] - 1.0 - n[c]));
        }
        CHECK(maps.diffuse[idx * 3 + 0] == 0.25f);
        CHECK(maps.diffuse[idx * 3 + 1] == 0.5f);
        CHECK(maps.diffuse[idx * 3 + 2] == 0.75f);
        CHECK(maps.metallic[idx] == 0.6f);
      }
    }
  }
  CHECK(covered > 1000);
  CHECK(worst_normal <= 0.02);
}

TEST_CASE("a +z facing surface stores the encoded normal (0.5, 0.5, 1)") {
  SceneDescription s = parse_scene(kPlainScene);
  s.surface[0].kind = PrimitiveKind::kBox;
  s.surface[0].half_size = {0.5, 0.5, 0.5};
  TriMesh m;
  m.vertices = {{-0.2, -0.2, 0.5}, {0.2, -0.2, 0.5}, {0.0, 0.2, 0.5}};
  m.triangles = {{0, 1, 2}};
  const TextureMaps maps = bake_textures(parametrize(m, 32), s, 32);
  int covered = 0;
  for (std::size_t i = 0; i < maps.state.size(); ++i) {
    if (maps.state[i] == TexelState::kEmpty) continue;
    ++covered;
    CHECK(maps.normal[i * 3 + 0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(maps.normal[i * 3 + 1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(maps.normal[i * 3 + 2] == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(covered > 10);
}

TEST_CASE("mesh OBJ round trip is exact") {
  const TriMesh m = parametrize(marching_cubes([](const Vec3& x) { return length(x) - 0.45; }, Aabb{}, 12), 256);
  CHECK(parse_obj(format_obj(m)) == m);
}
