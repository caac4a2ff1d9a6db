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

#include <filesystem>
#include <string_view>
#include <vector>

#include "vmesh/math.hpp"

namespace vmesh {

/// Pinhole camera. vertical_fov is in degrees.
struct CameraPose {
  Vec3 position{0.0, 0.0, 2.5};
  Vec3 look_at{0.0, 0.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  double vertical_fov = 50.0;
  int width = 256;
  int height = 256;

  friend bool operator==(const CameraPose&, const CameraPose&) = default;
};

/// Throws std::invalid_argument if the pose violates its invariants.
void validate_camera(const CameraPose& cam);

/// Orthonormal camera frame: right, true up, forward (toward look_at).
struct CameraFrame {
  Vec3 right;
  Vec3 up;
  Vec3 forward;
  double tan_half_fov = 0.0;
  double aspect = 1.0;
};

CameraFrame camera_frame(const CameraPose& cam);

/// Ray through the center of pixel (px, py), i.e. image point (px + 0.5, py + 0.5).
/// Throws std::out_of_range when the pixel is outside the image.
Ray camera_ray(const CameraPose& cam, double px, double py);

/// Same as camera_ray for a precomputed frame, without range checks.
Ray camera_ray(const CameraPose& cam, const CameraFrame& frame, double px, double py);

/// `px py pz lx ly lz ux uy uz fov width height` per line, `#` comments.
std::vector<CameraPose> parse_camera_path(std::string_view text);
std::vector<CameraPose> load_camera_path(const std::filesystem::path& path);
std::string format_camera_path(const std::vector<CameraPose>& cams);

/// Horizontal ring of poses looking at the origin.
std::vector<CameraPose> camera_ring(int count, double radius, double elevation_deg, double fov_deg,
                                    int width, int height, double azimuth_offset_deg = 0.0);

}  // namespace vmesh
