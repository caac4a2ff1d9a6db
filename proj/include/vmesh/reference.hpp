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

#include "vmesh/camera.hpp"
#include "vmesh/field.hpp"
#include "vmesh/image.hpp"
#include "vmesh/refbasis.hpp"
#include "vmesh/scene.hpp"

namespace vmesh {

inline constexpr int kDefaultReferenceSteps = 512;

/// Discretized appearance tables the shading model reads.
struct Appearance {
  CubeMapSet maps;
  AttenuationLut lut;
};

Appearance bake_appearance(const SceneDescription& scene, int env_edge = 512, int lut_size = 256);

/// Brute-force hybrid raymarch of one ray over the scene bounds. Returns premultiplied RGBA.
Rgba reference_ray(const SceneDescription& scene, const Appearance& app, const Ray& ray, int steps);

/// Reference image: hybrid surface+volume opacity per sample, shaded with the appearance model,
/// background transparent. Requires steps >= 2.
ImageRGBA render_reference(const SceneDescription& scene, const CameraPose& cam, int steps,
                           const Appearance& app);
ImageRGBA render_reference(const SceneDescription& scene, const CameraPose& cam,
                           int steps = kDefaultReferenceSteps);

}  // namespace vmesh
