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

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmesh/mesh.hpp"
#include "vmesh/scene.hpp"

namespace vmesh {

using ScalarField = std::function<double(const Vec3&)>;

/// Zero level set of `field` sampled on a (resolution+1)^3 lattice over `bounds`.
/// Vertices are shared across cells; faces wind counterclockwise seen from the positive side.
TriMesh marching_cubes(const ScalarField& field, const Aabb& bounds, int resolution);
TriMesh marching_cubes(const SceneDescription& scene, int resolution);

/// Triangles with area below this are dropped after extraction.
inline constexpr double kDegenerateArea = 1e-12;

/// Quadric-error edge collapse until the face count is at most face_ratio * original.
/// Boundary vertices stay fixed, and collapses that flip a face or break the edge link
/// condition are skipped.
TriMesh simplify(const TriMesh& mesh, double face_ratio);

/// Texel geometry of the per-triangle block atlas.
struct AtlasLayout {
  int atlas_size = 0;
  int blocks_per_row = 0;
  int block_texels = 0;
};

/// Smallest block edge that still leaves a gutter around both triangles of a block.
inline constexpr int kMinBlockTexels = 6;

class AtlasCapacityError : public std::runtime_error {
 public:
  AtlasCapacityError(int triangles, int atlas_size, int required_size)
      : std::runtime_error(std::to_string(triangles) + " triangles do not fit a " +
                           std::to_string(atlas_size) + " atlas; need at least " +
                           std::to_string(required_size)),
        required_size_(required_size) {}
  int required_size() const { return required_size_; }

 private:
  int required_size_;
};

/// Layout for `triangle_count` triangles; throws AtlasCapacityError when they do not fit.
AtlasLayout atlas_layout(std::size_t triangle_count, int atlas_size);

/// Packs every triangle into half of a square block. UVs are in [0,1]^2 with v growing down
/// the image rows.
TriMesh parametrize(const TriMesh& mesh, int atlas_size);

/// Gutter width, in texels, filled around each UV triangle.
inline constexpr double kGutterTexels = 2.0;

enum class TexelState : std::uint8_t { kEmpty = 0, kCovered = 1, kGutter = 2 };

/// Baked surface maps. Normals are stored encoded as (n + 1) / 2.
struct TextureMaps {
  int size = 0;
  std::vector<float> normal;    // 3 channels
  std::vector<float> diffuse;   // 3
  std::vector<float> tint;      // 3
  std::vector<float> weights;   // 4
  std::vector<float> metallic;  // 1
  std::vector<TexelState> state;
};

TextureMaps bake_textures(const TriMesh& mesh, const SceneDescription& scene, int size);

}  // namespace vmesh
