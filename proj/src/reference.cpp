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

#include "vmesh/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace vmesh {

namespace {

// Remaining transmittance below which further samples cannot change an 8-bit pixel.
constexpr double kNegligibleTransmittance = 1e-6;

}  // namespace

Appearance bake_appearance(const SceneDescription& scene, int env_edge, int lut_size) {
  return {bake_env_maps(scene, env_edge), bake_attenuation_lut(scene.lut, lut_size)};
}

Rgba reference_ray(const SceneDescription& scene, const Appearance& app, const Ray& ray,
                   int steps) {
  if (steps < 2) throw std::invalid_argument("reference raymarch needs at least 2 steps");
  const auto hit = ray_box_intersect(ray, scene.bounds);
  if (!hit) return {};
  const double t0 = hit->t_near;
  const double delta = (hit->t_far - hit->t_near) / (steps - 1);
  const Vec3 omega_o = -ray.direction;

  Rgb color;
  double opacity = 0.0;
  double transmittance = 1.0;
  double d_cur = sdf_eval(scene, ray.at(t0));
  for (int i = 0; i + 1 < steps; ++i) {
    const Vec3 x = ray.at(t0 + delta * i);
    const double d_next = sdf_eval(scene, ray.at(t0 + delta * (i + 1)));
    const double alpha_surf = neus_alpha(d_cur, d_next, scene.sharpness);
    const double sigma = density_eval(scene, x);
    const double alpha_vol = -std::expm1(-sigma * delta);
    const double alpha = hybrid_alpha(alpha_surf, alpha_vol);
    d_cur = d_next;
    if (alpha <= 0.0) continue;
    const double w = transmittance * alpha;
    const Rgb c = shade(sample_field(scene, x).material(), omega_o, app.maps, app.lut);
    color += c * w;
    opacity += w;
    transmittance *= 1.0 - alpha;
    if (transmittance < kNegligibleTransmittance) break;
  }
  return {float(color.r), float(color.g), float(color.b), float(opacity)};
}

ImageRGBA render_reference(const SceneDescription& scene, const CameraPose& cam, int steps,
                           const Appearance& app) {
  if (steps < 2) throw std::invalid_argument("reference raymarch needs at least 2 steps");
  const CameraFrame frame = camera_frame(cam);
  ImageRGBA image(cam.width, cam.height);
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      image.at(x, y) = reference_ray(scene, app, camera_ray(cam, frame, x, y), steps);
    }
  }
  return image;
}

ImageRGBA render_reference(const SceneDescription& scene, const CameraPose& cam, int steps) {
  return render_reference(scene, cam, steps, bake_appearance(scene));
}

}  // namespace vmesh
