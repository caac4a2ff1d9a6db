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

#include <span>
#include <vector>

#include "vmesh/math.hpp"
#include "vmesh/refbasis.hpp"
#include "vmesh/scene.hpp"

namespace vmesh {

/// SDF value reported for scenes without surface primitives.
inline constexpr double kEmptySdf = 1e6;
/// Central-difference step used for SDF gradients and ray derivatives.
inline constexpr double kGradientStep = 1e-4;

/// CSG evaluation in primitive order: union = min, intersect = max, subtract = max(a, -b).
double sdf_eval(const SceneDescription& scene, const Vec3& x);

struct SdfGradient {
  Vec3 normal{0.0, 0.0, 1.0};
  bool degenerate = false;
};

/// Normalized central-difference gradient; +z with `degenerate` set where it vanishes.
SdfGradient sdf_gradient(const SceneDescription& scene, const Vec3& x);

/// Sum of all density elements.
double density_eval(const SceneDescription& scene, const Vec3& x);

struct FieldSample {
  double sdf = 0.0;
  double density = 0.0;
  Vec3 normal{0.0, 0.0, 1.0};
  bool normal_degenerate = false;
  Rgb diffuse;
  Rgb tint;
  std::array<double, kBasisCount> weights{};
  double metallic = 0.0;

  MaterialSample material() const { return {diffuse, tint, weights, metallic, normal}; }
};

/// Material channels only (no SDF / gradient work).
MaterialSample material_eval(const SceneDescription& scene, const Vec3& x, const Vec3& normal);
FieldSample sample_field(const SceneDescription& scene, const Vec3& x);

/// Logistic sigmoid with slope s.
double sigmoid_phi(double x, double s);
/// Discrete surface opacity between consecutive SDF samples, in [0,1].
double neus_alpha(double d_i, double d_next, double s);
/// Opaque density along a ray, derivative by central differences of step kGradientStep.
double neus_opaque_density(const SceneDescription& scene, const Ray& ray, double t);
/// 1 - (1 - a_surf)(1 - a_vol).
double hybrid_alpha(double alpha_surf, double alpha_vol);

struct VolumeRenderResult {
  Rgb color;
  double opacity = 0.0;
  std::vector<double> weights;
};

/// Front-to-back quadrature: w_i = T_i a_i, T_i = prod_{j<i} (1 - a_j).
VolumeRenderResult volume_render(std::span<const double> alphas, std::span<const Rgb> colors);

}  // namespace vmesh
