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

#include "vmesh/field.hpp"

#include <cmath>
#include <stdexcept>

namespace vmesh {

double sdf_eval(const SceneDescription& scene, const Vec3& x) {
  if (scene.surface.empty()) return kEmptySdf;
  double d = primitive_sdf(scene.surface.front(), x);
  for (std::size_t i = 1; i < scene.surface.size(); ++i) {
    const Primitive& p = scene.surface[i];
    const double di = primitive_sdf(p, x);
    switch (p.op) {
      case CsgOp::kUnion:
        d = std::min(d, di);
        break;
      case CsgOp::kIntersect:
        d = std::max(d, di);
        break;
      case CsgOp::kSubtract:
        d = std::max(d, -di);
        break;
    }
  }
  return d;
}

SdfGradient sdf_gradient(const SceneDescription& scene, const Vec3& x) {
  if (scene.surface.empty()) return {{0.0, 0.0, 1.0}, true};
  const double h = kGradientStep;
  const Vec3 g{sdf_eval(scene, x + Vec3{h, 0, 0}) - sdf_eval(scene, x - Vec3{h, 0, 0}),
               sdf_eval(scene, x + Vec3{0, h, 0}) - sdf_eval(scene, x - Vec3{0, h, 0}),
               sdf_eval(scene, x + Vec3{0, 0, h}) - sdf_eval(scene, x - Vec3{0, 0, h})};
  const double len = length(g);
  if (!(len > 1e-12)) return {{0.0, 0.0, 1.0}, true};
  return {g / len, false};
}

double density_eval(const SceneDescription& scene, const Vec3& x) {
  double sigma = 0.0;
  for (const DensityElement& e : scene.volume) sigma += element_density(e, x);
  return sigma;
}

MaterialSample material_eval(const SceneDescription& scene, const Vec3& x, const Vec3& normal) {
  MaterialSample m;
  const auto d = scene.materials.diffuse.eval(x);
  const auto t = scene.materials.tint.eval(x);
  m.diffuse = {d[0], d[1], d[2]};
  m.tint = {t[0], t[1], t[2]};
  m.weights = scene.materials.weights.eval(x);
  m.metallic = scene.materials.metallic.eval(x)[0];
  m.normal = normal;
  return m;
}

FieldSample sample_field(const SceneDescription& scene, const Vec3& x) {
  FieldSample s;
  s.sdf = sdf_eval(scene, x);
  s.density = density_eval(scene, x);
  const SdfGradient g = sdf_gradient(scene, x);
  s.normal = g.normal;
  s.normal_degenerate = g.degenerate;
  const MaterialSample m = material_eval(scene, x, g.normal);
  s.diffuse = m.diffuse;
  s.tint = m.tint;
  s.weights = m.weights;
  s.metallic = m.metallic;
  return s;
}

double sigmoid_phi(double x, double s) { return 1.0 / (1.0 + std::exp(-s * x)); }

namespace {

// log(1 + e^y) without overflow.
double softplus(double y) { return std::max(y, 0.0) + std::log1p(std::exp(-std::abs(y))); }

}  // namespace

double neus_alpha(double d_i, double d_next, double s) {
  // (Phi(d_i) - Phi(d_next)) / Phi(d_i) evaluated in log space so that deep-inside samples,
  // where both sigmoids underflow, keep their finite ratio.
  const double log_ratio = softplus(-s * d_i) - softplus(-s * d_next);
  const double alpha = -std::expm1(log_ratio);
  return std::clamp(alpha, 0.0, 1.0);
}

double neus_opaque_density(const SceneDescription& scene, const Ray& ray, double t) {
  const double s = scene.sharpness;
  const double h = kGradientStep;
  const double phi = sigmoid_phi(sdf_eval(scene, ray.at(t)), s);
  const double phi_plus = sigmoid_phi(sdf_eval(scene, ray.at(t + h)), s);
  const double phi_minus = sigmoid_phi(sdf_eval(scene, ray.at(t - h)), s);
  const double dphi_dt = (phi_plus - phi_minus) / (2.0 * h);
  if (!(phi > 0.0)) return 0.0;
  return std::max(-dphi_dt / phi, 0.0);
}

double hybrid_alpha(double alpha_surf, double alpha_vol) {
  return 1.0 - (1.0 - alpha_surf) * (1.0 - alpha_vol);
}

VolumeRenderResult volume_render(std::span<const double> alphas, std::span<const Rgb> colors) {
  if (alphas.size() != colors.size()) {
    throw std::invalid_argument("volume_render: alphas and colors differ in length");
  }
  VolumeRenderResult out;
  out.weights.resize(alphas.size());
  double transmittance = 1.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double w = transmittance * alphas[i];
    out.weights[i] = w;
    out.color += colors[i] * w;
    out.opacity += w;
    transmittance *= 1.0 - alphas[i];
  }
  return out;
}

}  // namespace vmesh
