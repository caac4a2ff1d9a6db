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
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "vmesh/field.hpp"
#include "vmesh/refbasis.hpp"
#include "vmesh/scene.hpp"

using namespace vmesh;

namespace {

double dist(const Vec3& a, const Vec3& b) { return length(a - b); }
double dist(const Rgb& a, const Rgb& b) {
  return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return normalize(Vec3{n(rng), n(rng), n(rng)});
}

SceneDescription env_scene(const std::string& maps) {
  return parse_scene("scene {\n sharpness 10\n material {\n  diffuse constant 0 0 0\n }\n env {\n" +
                     maps + " }\n}\n");
}

}  // namespace

TEST_CASE("reflect examples") {
  const Vec3 n{0, 0, 1};
  CHECK(dist(reflect(n, n), n) < 1e-15);
  CHECK(dist(reflect({1, 0, 0}, n), {-1, 0, 0}) < 1e-15);
  const double h = std::sqrt(0.5);
  CHECK(dist(reflect({0, h, h}, n), {0, -h, h}) < 1e-15);
}

TEST_CASE("reflect preserves length and is an involution") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 o = random_unit(rng);
    const Vec3 n = random_unit(rng);
    const Vec3 r = reflect(o, n);
    CHECK(std::abs(length(r) - 1.0) < 1e-12);
    CHECK(dist(reflect(r, n), o) < 1e-12);
    CHECK(std::abs(dot(r, n) - dot(o, n)) < 1e-12);
  }
}

TEST_CASE("cube_coord picks the major axis face") {
  CHECK(cube_coord({1, 0, 0}).face == 0);
  CHECK(cube_coord({-1, 0.2, 0}).face == 1);
  CHECK(cube_coord({0.1, 1, 0}).face == 2);
  CHECK(cube_coord({0, -1, 0.3}).face == 3);
  CHECK(cube_coord({0, 0, 1}).face == 4);
  CHECK(cube_coord({0, 0.5, -1}).face == 5);
  const CubeCoord c = cube_coord({1, 0, 0});
  CHECK(c.u == doctest::Approx(0.5));
  CHECK(c.v == doctest::Approx(0.5));
}

TEST_CASE("cube texel directions map back to the texel") {
  const int edge = 7;
  for (int f = 0; f < kCubeFaces; ++f) {
    for (int y = 0; y < edge; ++y) {
      for (int x = 0; x < edge; ++x) {
        const Vec3 d = cube_texel_direction(f, x, y, edge);
        CHECK(std::abs(length(d) - 1.0) < 1e-12);
        const CubeCoord c = cube_coord(d);
        CHECK(c.face == f);
        CHECK(c.u == doctest::Approx((x + 0.5) / edge));
        CHECK(c.v == doctest::Approx((y + 0.5) / edge));
      }
    }
  }
}

TEST_CASE("sample_cubemap examples") {
  CubeMapSet maps(5);
  for (int f = 0; f < kCubeFaces; ++f) {
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 5; ++x) {
        maps.set_texel(0, f, x, y, f == 4 ? Rgb{1, 0, 0} : Rgb{0, 0, 0});
        maps.set_texel(1, f, x, y, {0.25, 0.5, 0.75});
        maps.set_texel(2, f, x, y, {x / 8.0, y / 8.0, f / 8.0});
      }
    }
  }
  CHECK(sample_cubemap(maps, 0, {0, 0, 1}) == Rgb{1, 0, 0});
  CHECK(dist(sample_cubemap(maps, 2, {1, 0, 0}), maps.texel(2, 0, 2, 2)) < 1e-6);
  CHECK(dist(sample_cubemap(maps, 1, normalize(Vec3{1, 1, 1})), Rgb{0.25, 0.5, 0.75}) < 1e-6);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    CHECK(dist(sample_cubemap(maps, 1, random_unit(rng)), Rgb{0.25, 0.5, 0.75}) < 1e-6);
  }
}

TEST_CASE("specular_color examples") {
  const std::array<Rgb, 4> bases{Rgb{1, 0, 0}, Rgb{0, 0, 1}, Rgb{0.2, 0.3, 0.4}, Rgb{1, 1, 1}};
  std::array<double, 4> w{1, 0, 0, 0};
  CHECK(specular_color(w, bases) == Rgb{1, 0, 0});
  w = {0.5, 0.5, 0, 0};
  CHECK(specular_color(w, bases) == Rgb{0.5, 0, 0.5});
  const std::array<Rgb, 4> same{Rgb{0.3, 0.6, 0.9}, Rgb{0.3, 0.6, 0.9}, Rgb{0.3, 0.6, 0.9},
                                Rgb{0.3, 0.6, 0.9}};
  w = {0.1, 0.2, 0.3, 0.4};
  CHECK(dist(specular_color(w, same), Rgb{0.3, 0.6, 0.9}) < 1e-12);
  w = {1, 1, 1, 1};
  CHECK(specular_color(w, bases) == Rgb{1, 1, 1});  // clamped
}

TEST_CASE("attenuation LUT examples") {
  const AttenuationLut lut = bake_attenuation_lut(LutKind::kSchlick, 256);
  CHECK(lut.at(255, 255) == 1.0f);
  CHECK(lut.at(255, 0) == 0.0f);
  CHECK(attenuation(lut, 1.0, 0.0) == 0.0);
  CHECK(attenuation(lut, 0.0, 0.3) == doctest::Approx(1.0).epsilon(1e-6));
  // Odd size puts cos = 0.5 on a grid node.
  const AttenuationLut odd = bake_attenuation_lut(LutKind::kSchlick, 257);
  CHECK(attenuation(odd, 0.5, 0.0) == doctest::Approx(0.03125).epsilon(1e-6));
  CHECK(attenuation(lut, 1.0, 0.04) == doctest::Approx(0.04).epsilon(1e-3));
  for (int v = 0; v < 256; v += 17) {
    for (int u = 0; u < 256; u += 13) {
      CHECK(attenuation(lut, u / 255.0, v / 255.0) == double(lut.at(u, v)));
    }
  }
  CHECK_THROWS_AS(bake_attenuation_lut(LutKind::kSchlick, 1), std::invalid_argument);
}

TEST_CASE("attenuation LUT matches the closed form within 1e-3 off-grid") {
  const AttenuationLut lut = bake_attenuation_lut(LutKind::kSchlick, 256);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double c = u(rng), m = u(rng);
    const double exact = m + (1.0 - m) * std::pow(1.0 - c, 5.0);
    worst = std::max(worst, std::abs(attenuation(lut, c, m) - exact));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("bake_env_maps examples") {
  const SceneDescription s = env_scene(
      "  map 0 constant 0.2 0.4 0.6\n"
      "  map 1 gradient axis z low 0 0 0 high 1 0.5 0.25\n"
      "  map 2 lobe dir 0 0 1 power 8 color 1 1 1\n"
      "  map 3 constant 0 0 0\n");
  const int edge = 9;
  const CubeMapSet maps = bake_env_maps(s, edge);
  double max_lobe = -1.0;
  int arg_face = -1, arg_x = -1, arg_y = -1;
  for (int f = 0; f < kCubeFaces; ++f) {
    for (int y = 0; y < edge; ++y) {
      for (int x = 0; x < edge; ++x) {
        CHECK(dist(maps.texel(0, f, x, y), Rgb{0.2, 0.4, 0.6}) < 1e-6);
        const Vec3 d = cube_texel_direction(f, x, y, edge);
        CHECK(dist(maps.texel(2, f, x, y), s.env[2].eval(d)) < 1e-6);
        if (maps.texel(2, f, x, y).r > max_lobe) {
          max_lobe = maps.texel(2, f, x, y).r;
          arg_face = f;
          arg_x = x;
          arg_y = y;
        }
      }
    }
  }
  CHECK(arg_face == 4);
  CHECK(arg_x == edge / 2);
  CHECK(arg_y == edge / 2);
  CHECK(dist(maps.texel(1, 4, edge / 2, edge / 2), Rgb{1, 0.5, 0.25}) < 1e-6);
  CHECK(dist(maps.texel(1, 5, edge / 2, edge / 2), Rgb{0, 0, 0}) < 1e-6);
}

TEST_CASE("tone_map examples") {
  CHECK(tone_map({0, 0, 0}) == Rgb{0, 0, 0});
  CHECK(dist(tone_map({1, 1, 1}), Rgb{1, 1, 1}) < 1e-12);
  CHECK(tone_map({0.5, 0.5, 0.5}).r == doctest::Approx(0.735357).epsilon(1e-5));
  CHECK(tone_map({-1, 2, 0.002}) == Rgb{0, tone_map({1, 1, 1}).g, 12.92 * 0.002});
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = srgb_encode(i / 1000.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("shade examples") {
  const SceneDescription s = env_scene(
      "  map 0 constant 1 1 1\n  map 1 constant 1 1 1\n  map 2 constant 1 1 1\n  map 3 constant 1 1 1\n");
  const CubeMapSet maps = bake_env_maps(s, 4);
  MaterialSample m;
  m.diffuse = {0.3, 0.2, 0.1};
  m.tint = {0, 0, 0};
  m.weights = {0.2, 0.3, 0.1, 0.4};
  m.metallic = 0.7;
  const AttenuationLut schlick = bake_attenuation_lut(LutKind::kSchlick, 32);
  CHECK(shade(m, {0, 0, 1}, maps, schlick) == tone_map(m.diffuse));
  m.diffuse = {0, 0, 0};
  m.tint = {1, 1, 1};
  m.weights = {1, 0, 0, 0};
  const AttenuationLut one(8, 1.0f);
  const Rgb white = shade(m, normalize(Vec3{0.3, 0.1, 1}), maps, one);
  CHECK(dist(white, Rgb{1, 1, 1}) < 1e-12);
}

TEST_CASE("shade matches a step-by-step evaluation on the bundled scene") {
  const SceneDescription s = load_scene(test::source_dir() / "scenes" / "hybrid_demo.scene");
  const CubeMapSet maps = bake_env_maps(s, 32);
  const AttenuationLut lut = bake_attenuation_lut(s.lut, 64);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int i = 0; i < 200; ++i) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const FieldSample fs = sample_field(s, x);
    const MaterialSample m = fs.material();
    Vec3 o = random_unit(rng);
    if (dot(o, m.normal) < 0) o = -o;
    const double c = std::clamp(dot(o, m.normal), 0.0, 1.0);
    const Vec3 r = m.normal * (2.0 * dot(o, m.normal)) - o;
    double spec[3] = {0, 0, 0};
    for (int k = 0; k < kBasisCount; ++k) {
      const Rgb b = sample_cubemap(maps, k, r);
      spec[0] += m.weights[k] * b.r;
      spec[1] += m.weights[k] * b.g;
      spec[2] += m.weights[k] * b.b;
    }
    const double a = attenuation(lut, c, m.metallic);
    double expect[3];
    const double diffuse[3] = {m.diffuse.r, m.diffuse.g, m.diffuse.b};
    const double tint[3] = {m.tint.r, m.tint.g, m.tint.b};
    for (int ch = 0; ch < 3; ++ch) {
      const double lin = std::clamp(diffuse[ch] + tint[ch] * a * std::clamp(spec[ch], 0.0, 1.0), 0.0, 1.0);
      expect[ch] = lin <= 0.0031308 ? 12.92 * lin : 1.055 * std::pow(lin, 1.0 / 2.4) - 0.055;
    }
    const Rgb got = shade(m, o, maps, lut);
    CHECK(std::abs(got.r - expect[0]) < 1e-6);
    CHECK(std::abs(got.g - expect[1]) < 1e-6);
    CHECK(std::abs(got.b - expect[2]) < 1e-6);
  }
}
