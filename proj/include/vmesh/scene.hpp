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
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vmesh/math.hpp"

namespace vmesh {

inline constexpr int kBasisCount = 4;

enum class PrimitiveKind { kSphere, kBox, kTorus, kCapsule };
enum class CsgOp { kUnion, kIntersect, kSubtract };

/// One CSG leaf. Only the fields of its kind are meaningful.
/// Torus lies in the xz-plane around `center` (axis +y).
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::kSphere;
  CsgOp op = CsgOp::kUnion;
  Vec3 center;
  double radius = 0.0;  // sphere, capsule
  Vec3 half_size;       // box
  double major = 0.0;   // torus
  double minor = 0.0;   // torus
  Vec3 from;            // capsule
  Vec3 to;              // capsule
};

double primitive_sdf(const Primitive& p, const Vec3& x);

enum class DensityKind { kBlob, kCurve, kSlab };

/// Density element in sigma-units per scene unit.
///  blob:  density * exp(-|x-c|^2 / (2 r^2)), truncated at 3r
///  curve: density * (1 - (q/r)^2)^2 for segment distance q < r
///  slab:  density for min <= x[axis] <= max
struct DensityElement {
  DensityKind kind = DensityKind::kBlob;
  Vec3 center;
  Vec3 from;
  Vec3 to;
  double radius = 0.0;
  int axis = 2;
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;
};

double element_density(const DensityElement& e, const Vec3& x);
/// Conservative bounds of the element's support (may extend past the scene bounds for slabs).
Aabb element_support(const DensityElement& e, const Aabb& scene_bounds);

/// Material channel that is either constant or a 3D checkerboard of two values.
template <int N>
struct MaterialField {
  enum class Kind { kConstant, kChecker };
  Kind kind = Kind::kConstant;
  std::array<double, N> a{};
  std::array<double, N> b{};
  double scale = 1.0;

  std::array<double, N> eval(const Vec3& x) const {
    if (kind == Kind::kConstant) return a;
    const long long parity = static_cast<long long>(std::floor(x.x * scale)) +
                             static_cast<long long>(std::floor(x.y * scale)) +
                             static_cast<long long>(std::floor(x.z * scale));
    return (parity & 1) == 0 ? a : b;
  }
};

struct Materials {
  MaterialField<3> diffuse;
  MaterialField<3> tint;
  MaterialField<kBasisCount> weights;
  MaterialField<1> metallic;
};

enum class EnvKind { kConstant, kGradient, kLobe };

/// Analytic environment basis, evaluated on directions.
struct EnvDefinition {
  EnvKind kind = EnvKind::kConstant;
  Rgb color;
  Rgb low;
  Rgb high;
  int axis = 2;
  Vec3 direction{0.0, 0.0, 1.0};
  double power = 1.0;

  Rgb eval(const Vec3& dir) const;
};

enum class LutKind { kSchlick };

struct SceneDescription {
  Aabb bounds;
  double sharpness = 0.0;
  std::vector<Primitive> surface;
  std::vector<DensityElement> volume;
  Materials materials;
  std::array<EnvDefinition, kBasisCount> env;
  LutKind lut = LutKind::kSchlick;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses the scene DSL. Throws ParseError with the offending line.
SceneDescription parse_scene(std::string_view text);
SceneDescription load_scene(const std::filesystem::path& path);

}  // namespace vmesh
