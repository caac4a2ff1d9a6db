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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vmesh/math.hpp"

namespace vmesh {

using Triangle = std::array<int, 3>;
using TriangleUv = std::array<Vec2, 3>;

/// Indexed triangle mesh, counterclockwise front faces. `uvs` is either empty or holds one UV
/// triple per triangle (per-corner coordinates).
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::vector<TriangleUv> uvs;

  bool has_uvs() const { return !uvs.empty(); }
  bool empty() const { return triangles.empty(); }
  friend bool operator==(const TriMesh&, const TriMesh&) = default;
};

/// Throws std::invalid_argument on out-of-range indices or a partial UV set.
void validate_mesh(const TriMesh& mesh);

double triangle_area(const TriMesh& mesh, int tri);
Vec3 triangle_normal(const TriMesh& mesh, int tri);

/// Topology summary over the vertices referenced by triangles.
struct MeshTopology {
  long long vertices = 0;
  long long edges = 0;
  long long faces = 0;
  long long boundary_edges = 0;
  long long nonmanifold_edges = 0;

  long long euler_characteristic() const { return vertices - edges + faces; }
  bool watertight() const { return boundary_edges == 0 && nonmanifold_edges == 0; }
};

MeshTopology mesh_topology(const TriMesh& mesh);

/// OBJ text with `v`, `vt` and `f v/vt` records. Coordinates use the shortest decimal form that
/// parses back to the same double.
std::string format_obj(const TriMesh& mesh);
TriMesh parse_obj(std::string_view text);
void write_obj(const std::filesystem::path& path, const TriMesh& mesh);
TriMesh read_obj(const std::filesystem::path& path);

}  // namespace vmesh
