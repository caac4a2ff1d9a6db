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

#include <stdexcept>
#include <unordered_map>

#include "mc_tables.hpp"
#include "vmesh/field.hpp"
#include "vmesh/mesher.hpp"

namespace vmesh {

namespace {

// Corner offsets (x, y, z) in table order; corners 0-3 form the y=0 face.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1},
                               {0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdgeCorners[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                     {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

// Keeps edge vertices off lattice nodes so neighbouring edge vertices never coincide.
constexpr double kMinEdgeParam = 1e-3;

}  // namespace

TriMesh marching_cubes(const ScalarField& field, const Aabb& bounds, int resolution) {
  if (resolution < 1) throw std::invalid_argument("marching cubes resolution must be positive");
  const int n = resolution;
  const int stride = n + 1;
  const Vec3 cell = bounds.extent() / double(n);
  auto node_pos = [&](int i, int j, int k) {
    return Vec3{bounds.min.x + cell.x * i, bounds.min.y + cell.y * j, bounds.min.z + cell.z * k};
  };

  // Two z-layers of lattice values.
  std::vector<double> layer0(std::size_t(stride) * stride);
  std::vector<double> layer1(std::size_t(stride) * stride);
  auto fill = [&](std::vector<double>& layer, int k) {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) layer[std::size_t(j) * stride + i] = field(node_pos(i, j, k));
    }
  };
  fill(layer0, 0);

  TriMesh mesh;
  std::unordered_map<long long, int> edge_vertex;
  auto vertex_on_edge = [&](int i, int j, int k, int axis, double va, double vb) {
    const long long key =
        ((static_cast<long long>(k) * stride + j) * stride + i) * 3 + static_cast<long long>(axis);
    if (const auto it = edge_vertex.find(key); it != edge_vertex.end()) return it->second;
    const double t = std::clamp(va / (va - vb), kMinEdgeParam, 1.0 - kMinEdgeParam);
    Vec3 p = node_pos(i, j, k);
    p[axis] += cell[axis] * t;
    const int id = int(mesh.vertices.size());
    mesh.vertices.push_back(p);
    edge_vertex.emplace(key, id);
    return id;
  };

  for (int k = 0; k < n; ++k) {
    fill(layer1, k + 1);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double v[8];
        int cube_case = 0;
        for (int c = 0; c < 8; ++c) {
          const auto& o = kCorner[c];
          const auto& layer = o[2] == 0 ? layer0 : layer1;
          v[c] = layer[std::size_t(j + o[1]) * stride + i + o[0]];
          if (v[c] < 0.0) cube_case |= 1 << c;
        }
        if (cube_case == 0 || cube_case == 255) continue;
        const auto& tris = detail::kMcTriangles[cube_case];
        for (int t = 0; tris[t] >= 0; t += 3) {
          Triangle tri{};
          for (int e = 0; e < 3; ++e) {
            const int edge = tris[t + e];
            int a = kEdgeCorners[edge][0];
            int b = kEdgeCorners[edge][1];
            int axis = 0;
            while (kCorner[a][axis] == kCorner[b][axis]) ++axis;
            if (kCorner[a][axis] > kCorner[b][axis]) std::swap(a, b);
            tri[e] = vertex_on_edge(i + kCorner[a][0], j + kCorner[a][1], k + kCorner[a][2], axis,
                                    v[a], v[b]);
          }
          mesh.triangles.push_back(tri);
        }
      }
    }
    std::swap(layer0, layer1);
  }

  std::erase_if(mesh.triangles, [&](const Triangle& t) {
    const Vec3& a = mesh.vertices[t[0]];
    return 0.5 * length(cross(mesh.vertices[t[1]] - a, mesh.vertices[t[2]] - a)) < kDegenerateArea;
  });
  return mesh;
}

TriMesh marching_cubes(const SceneDescription& scene, int resolution) {
  return marching_cubes([&scene](const Vec3& x) { return sdf_eval(scene, x); }, scene.bounds,
                        resolution);
}

}  // namespace vmesh
