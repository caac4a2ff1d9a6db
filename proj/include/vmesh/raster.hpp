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
#include <vector>

#include "vmesh/camera.hpp"
#include "vmesh/mesh.hpp"

namespace vmesh {

/// Nearest front-facing triangle under one pixel center.
struct RasterHit {
  int triangle = -1;
  double t = 0.0;                      // ray parameter of the hit along the pixel ray
  std::array<double, 3> bary{};        // weights of the triangle corners
  bool covered() const { return triangle >= 0; }
};

/// Perspective rasterization with a depth test, back faces culled. Coverage follows the
/// top-left fill rule on projected pixel centers; depth and barycentrics come from intersecting
/// the pixel ray with the triangle plane. Equal depths keep the lower triangle index.
std::vector<RasterHit> rasterize_triangles(const TriMesh& mesh, const CameraPose& cam);

}  // namespace vmesh
