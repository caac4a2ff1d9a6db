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

#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "vmesh/camera.hpp"
#include "vmesh/image.hpp"
#include "vmesh/math.hpp"

using namespace vmesh;

TEST_CASE("ray_box_intersect axis entry and exit") {
  const auto hit = ray_box_intersect({{0, 0, -2}, {0, 0, 1}}, Aabb{});
  REQUIRE(hit);
  CHECK(hit->t_near == doctest::Approx(1.0));
  CHECK(hit->t_far == doctest::Approx(3.0));
}

TEST_CASE("ray_box_intersect parallel miss") {
  CHECK_FALSE(ray_box_intersect({{0, 0, -2}, {0, 1, 0}}, Aabb{}));
}

TEST_CASE("ray_box_intersect clamps an interior origin") {
  const auto hit = ray_box_intersect({{0, 0, 0}, {1, 0, 0}}, Aabb{});
  REQUIRE(hit);
  CHECK(hit->t_near == 0.0);
  CHECK(hit->t_far == doctest::Approx(1.0));
}

TEST_CASE("ray_box_intersect box behind the origin") {
  CHECK_FALSE(ray_box_intersect({{0, 0, 3}, {0, 0, 1}}, Aabb{}));
}

TEST_CASE("ray_box_intersect endpoints lie on the boundary") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Aabb box{{-1, -0.5, -0.25}, {0.75, 1, 0.5}};
  auto on_boundary = [&](const Vec3& p) {
    double gap = 1e30;
    for (int a = 0; a < 3; ++a) {
      gap = std::min({gap, std::abs(p[a] - box.min[a]), std::abs(p[a] - box.max[a])});
    }
    return gap < 1e-6;
  };
  int hits = 0;
  for (int i = 0; i < 5000; ++i) {
    const Ray ray{{u(rng), u(rng), u(rng)}, normalize(Vec3{u(rng), u(rng), u(rng)})};
    const auto hit = ray_box_intersect(ray, box);
    if (!hit) continue;
    ++hits;
    CHECK(hit->t_near <= hit->t_far);
    CHECK(on_boundary(ray.at(hit->t_far)));
    if (hit->t_near > 0.0) {
      CHECK(on_boundary(ray.at(hit->t_near)));
    } else {
      CHECK(box.contains(ray.origin));
    }
  }
  CHECK(hits > 100);
}

TEST_CASE("camera_ray center pixel follows the view axis") {
  CameraPose cam;
  cam.position = {1, 2, 3};
  cam.look_at = {0.2, -0.1, 0.4};
  cam.width = 33;
  cam.height = 17;
  const Ray r = camera_ray(cam, 16, 8);
  const Vec3 axis = normalize(cam.look_at - cam.position);
  CHECK(length(r.direction - axis) < 1e-12);
}

TEST_CASE("camera_ray fov 90 right edge is 45 degrees off axis") {
  CameraPose cam;
  cam.position = {0, 0, 0};
  cam.look_at = {0, 0, -1};
  cam.vertical_fov = 90.0;
  cam.width = 64;
  cam.height = 64;
  // Right edge midheight: image point (64, 32), i.e. px = 63.5, py = 31.5.
  const Ray r = camera_ray(cam, 63.5, 31.5);
  const double angle = std::atan2(r.direction.x, -r.direction.z);
  CHECK(angle == doctest::Approx(M_PI / 4).epsilon(1e-12));
  CHECK(r.direction.y == doctest::Approx(0.0));
}

TEST_CASE("camera_ray returns unit directions and rejects outside pixels") {
  CameraPose cam;
  cam.width = 20;
  cam.height = 10;
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      CHECK(std::abs(length(camera_ray(cam, x, y).direction) - 1.0) < 1e-12);
    }
  }
  CHECK_THROWS_AS(camera_ray(cam, 20, 0), std::out_of_range);
  CHECK_THROWS_AS(camera_ray(cam, -0.5, 0), std::out_of_range);
  CHECK_THROWS_AS(camera_ray(cam, 0, 10), std::out_of_range);
}

TEST_CASE("camera corner rays are symmetric about the view axis") {
  CameraPose cam;
  cam.position = {0.3, 0.4, 2.0};
  cam.look_at = {0.3, 0.4, 0.0};
  cam.width = 40;
  cam.height = 30;
  const CameraFrame f = camera_frame(cam);
  const Vec3 d00 = camera_ray(cam, 0, 0).direction;
  const Vec3 d10 = camera_ray(cam, 39, 0).direction;
  const Vec3 d01 = camera_ray(cam, 0, 29).direction;
  const Vec3 d11 = camera_ray(cam, 39, 29).direction;
  const double c = dot(d00, f.forward);
  for (const Vec3& d : {d10, d01, d11}) CHECK(dot(d, f.forward) == doctest::Approx(c));
  CHECK(dot(d00, f.right) == doctest::Approx(-dot(d10, f.right)));
  CHECK(dot(d00, f.up) == doctest::Approx(-dot(d01, f.up)));
}

TEST_CASE("camera validation") {
  CameraPose cam;
  cam.look_at = cam.position;
  CHECK_THROWS(validate_camera(cam));
  cam = {};
  cam.up = normalize(cam.look_at - cam.position);
  CHECK_THROWS(validate_camera(cam));
  cam = {};
  cam.vertical_fov = 180.0;
  CHECK_THROWS(validate_camera(cam));
  cam = {};
  cam.width = 0;
  CHECK_THROWS(validate_camera(cam));
}

TEST_CASE("camera path parse, comments and round trip") {
  const auto cams = parse_camera_path(
      "# orbit\n"
      "0 0 2.5 0 0 0 0 1 0 50 64 32\n"
      "\n"
      "1 1 1  0 0 0  0 1 0  30 8 8  # trailing\n");
  REQUIRE(cams.size() == 2);
  CHECK(cams[0].width == 64);
  CHECK(cams[0].height == 32);
  CHECK(cams[1].vertical_fov == 30.0);
  CHECK(parse_camera_path(format_camera_path(cams)) == cams);
  const auto ring = camera_ring(7, 2.5, 20.0, 50.0, 16, 16, 3.0);
  CHECK(parse_camera_path(format_camera_path(ring)) == ring);
}

TEST_CASE("camera path errors report the line number") {
  try {
    parse_camera_path("0 0 2.5 0 0 0 0 1 0 50 64 64\n# c\n0 0 2.5 0 0 0 0 1 0 50 64\n");
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS(parse_camera_path("0 0 0 0 0 0 0 1 0 50 64 64\n"));  // position == look_at
  CHECK_THROWS(parse_camera_path("a b c d e f g h i j k l\n"));
}

namespace {

ImageRGBA filled(int w, int h, Rgba c) {
  ImageRGBA im(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) im.at(x, y) = c;
  }
  return im;
}

}  // namespace

TEST_CASE("psnr examples") {
  const ImageRGBA black = filled(8, 6, {0, 0, 0, 1});
  const ImageRGBA white = filled(8, 6, {1, 1, 1, 1});
  CHECK(psnr(black, black) == kPsnrCap);
  CHECK(psnr(black, white) == doctest::Approx(0.0));
  // Uniform 0.1 offset in one channel: MSE = 0.01 / 3.
  ImageRGBA a = filled(8, 6, {0.5f, 0.5f, 0.5f, 1});
  ImageRGBA b = a;
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 8; ++x) b.at(x, y).g = 0.5f + 0.1f;
  }
  double mse = 0.0;
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 8; ++x) {
      const double d = double(a.at(x, y).g) - double(b.at(x, y).g);
      mse += d * d;
    }
  }
  mse /= 6 * 8 * 3;
  CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(1.0 / mse)).epsilon(1e-9));
  CHECK(psnr(a, b) == doctest::Approx(24.7712).epsilon(1e-4));
  CHECK(psnr(a, b) == psnr(b, a));
  // Alpha is excluded.
  CHECK(psnr(filled(4, 4, {0.2f, 0.2f, 0.2f, 0}), filled(4, 4, {0.2f, 0.2f, 0.2f, 1})) == kPsnrCap);
  CHECK_THROWS(psnr(filled(4, 4, {}), filled(4, 5, {})));
}

TEST_CASE("png round trip preserves bytes") {
  Image8 im(13, 7, 4);
  std::mt19937 rng(3);
  for (auto& b : im.data) b = std::uint8_t(rng());
  const auto dir = std::filesystem::temp_directory_path() / "vmesh_test_png";
  std::filesystem::create_directories(dir);
  write_png(dir / "a.png", im);
  CHECK(read_png(dir / "a.png") == im);
  for (int c : {1, 3}) {
    Image8 g(5, 9, c);
    for (auto& b : g.data) b = std::uint8_t(rng());
    write_png(dir / "g.png", g);
    CHECK(read_png(dir / "g.png") == g);
  }
  CHECK_THROWS_WITH_AS(read_png(dir / "missing.png"), doctest::Contains("missing.png"),
                       std::runtime_error);
}

TEST_CASE("ImageRGBA 8-bit conversion") {
  ImageRGBA im = filled(3, 2, {0.5f, 0.0f, 1.0f, 0.25f});
  const Image8 q = im.to_image8();
  CHECK(q.at(0, 0, 0) == 128);
  CHECK(q.at(2, 1, 2) == 255);
  CHECK(q.at(1, 1, 3) == 64);
  const ImageRGBA back = ImageRGBA::from_image8(q);
  CHECK(back.unorm8());
  CHECK(back.at(0, 0).r == doctest::Approx(128.0 / 255.0));
}
