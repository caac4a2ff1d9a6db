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

#include "vmesh/camera.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vmesh {

void validate_camera(const CameraPose& cam) {
  if (!is_finite(cam.position) || !is_finite(cam.look_at) || !is_finite(cam.up)) {
    throw std::invalid_argument("camera has non-finite components");
  }
  const Vec3 view = cam.look_at - cam.position;
  if (length(view) == 0.0) throw std::invalid_argument("camera position equals look_at");
  if (length(cross(normalize(view), cam.up)) < 1e-9) {
    throw std::invalid_argument("camera up vector is parallel to the view axis");
  }
  if (!(cam.vertical_fov > 0.0 && cam.vertical_fov < 180.0)) {
    throw std::invalid_argument("camera fov must be in (0, 180) degrees");
  }
  if (cam.width <= 0 || cam.height <= 0) {
    throw std::invalid_argument("camera image size must be positive");
  }
}

CameraFrame camera_frame(const CameraPose& cam) {
  validate_camera(cam);
  CameraFrame f;
  f.forward = normalize(cam.look_at - cam.position);
  f.right = normalize(cross(f.forward, cam.up));
  f.up = cross(f.right, f.forward);
  f.tan_half_fov = std::tan(cam.vertical_fov * std::numbers::pi / 360.0);
  f.aspect = double(cam.width) / double(cam.height);
  return f;
}

Ray camera_ray(const CameraPose& cam, const CameraFrame& frame, double px, double py) {
  const double sx = (2.0 * (px + 0.5) / cam.width - 1.0) * frame.tan_half_fov * frame.aspect;
  const double sy = (1.0 - 2.0 * (py + 0.5) / cam.height) * frame.tan_half_fov;
  return {cam.position, normalize(frame.forward + frame.right * sx + frame.up * sy)};
}

Ray camera_ray(const CameraPose& cam, double px, double py) {
  if (!(px >= 0.0 && px < cam.width && py >= 0.0 && py < cam.height)) {
    throw std::out_of_range("pixel (" + std::to_string(px) + ", " + std::to_string(py) +
                            ") outside " + std::to_string(cam.width) + "x" +
                            std::to_string(cam.height) + " image");
  }
  return camera_ray(cam, camera_frame(cam), px, py);
}

namespace {

double parse_number(std::string_view token, int line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw std::runtime_error("camera path line " + std::to_string(line) + ": bad number '" +
                             std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::vector<CameraPose> parse_camera_path(std::string_view text) {
  std::vector<CameraPose> cams;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() != 12) {
      throw std::runtime_error("camera path line " + std::to_string(line_no) +
                               ": expected 12 fields, got " + std::to_string(tokens.size()));
    }
    double v[12];
    for (int i = 0; i < 12; ++i) v[i] = parse_number(tokens[i], line_no);
    CameraPose cam;
    cam.position = {v[0], v[1], v[2]};
    cam.look_at = {v[3], v[4], v[5]};
    cam.up = {v[6], v[7], v[8]};
    cam.vertical_fov = v[9];
    cam.width = int(v[10]);
    cam.height = int(v[11]);
    if (double(cam.width) != v[10] || double(cam.height) != v[11]) {
      throw std::runtime_error("camera path line " + std::to_string(line_no) +
                               ": width and height must be integers");
    }
    try {
      validate_camera(cam);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("camera path line " + std::to_string(line_no) + ": " + e.what());
    }
    cams.push_back(cam);
  }
  return cams;
}

std::vector<CameraPose> load_camera_path(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open camera path " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_camera_path(buf.str());
}

std::string format_camera_path(const std::vector<CameraPose>& cams) {
  std::ostringstream out;
  out.precision(17);
  out << "# px py pz lx ly lz ux uy uz fov width height\n";
  for (const auto& c : cams) {
    out << c.position.x << ' ' << c.position.y << ' ' << c.position.z << ' ' << c.look_at.x << ' '
        << c.look_at.y << ' ' << c.look_at.z << ' ' << c.up.x << ' ' << c.up.y << ' ' << c.up.z
        << ' ' << c.vertical_fov << ' ' << c.width << ' ' << c.height << '\n';
  }
  return out.str();
}

std::vector<CameraPose> camera_ring(int count, double radius, double elevation_deg, double fov_deg,
                                    int width, int height, double azimuth_offset_deg) {
  std::vector<CameraPose> cams;
  const double elev = elevation_deg * std::numbers::pi / 180.0;
  for (int i = 0; i < count; ++i) {
    const double az = (azimuth_offset_deg + 360.0 * i / count) * std::numbers::pi / 180.0;
    CameraPose c;
    c.position = {radius * std::cos(elev) * std::cos(az), radius * std::sin(elev),
                  radius * std::cos(elev) * std::sin(az)};
    c.look_at = {0.0, 0.0, 0.0};
    c.up = {0.0, 1.0, 0.0};
    c.vertical_fov = fov_deg;
    c.width = width;
    c.height = height;
    cams.push_back(c);
  }
  return cams;
}

}  // namespace vmesh
