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

#include "vmesh/scene.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace vmesh {

namespace {

double segment_distance(const Vec3& x, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(x - a, ab) / len2, 0.0, 1.0) : 0.0;
  return length(x - (a + ab * t));
}

}  // namespace

double primitive_sdf(const Primitive& p, const Vec3& x) {
  switch (p.kind) {
    case PrimitiveKind::kSphere:
      return length(x - p.center) - p.radius;
    case PrimitiveKind::kBox: {
      const Vec3 q = vabs(x - p.center) - p.half_size;
      const Vec3 outside = vmax(q, Vec3{});
      return length(outside) + std::min(std::max(q.x, std::max(q.y, q.z)), 0.0);
    }
    case PrimitiveKind::kTorus: {
      const Vec3 d = x - p.center;
      const double ring = std::hypot(d.x, d.z) - p.major;
      return std::hypot(ring, d.y) - p.minor;
    }
    case PrimitiveKind::kCapsule:
      return segment_distance(x, p.from, p.to) - p.radius;
  }
  return 0.0;
}

double element_density(const DensityElement& e, const Vec3& x) {
  switch (e.kind) {
    case DensityKind::kBlob: {
      const Vec3 d = x - e.center;
      const double r2 = dot(d, d);
      const double s2 = e.radius * e.radius;
      if (r2 >= 9.0 * s2) return 0.0;
      return e.density * std::exp(-0.5 * r2 / s2);
    }
    case DensityKind::kCurve: {
      const double q = segment_distance(x, e.from, e.to);
      if (q >= e.radius) return 0.0;
      const double f = 1.0 - (q / e.radius) * (q / e.radius);
      return e.density * f * f;
    }
    case DensityKind::kSlab: {
      const double v = x[e.axis];
      return (v >= e.lo && v <= e.hi) ? e.density : 0.0;
    }
  }
  return 0.0;
}

Aabb element_support(const DensityElement& e, const Aabb& scene_bounds) {
  switch (e.kind) {
    case DensityKind::kBlob: {
      const Vec3 r{3.0 * e.radius, 3.0 * e.radius, 3.0 * e.radius};
      return {e.center - r, e.center + r};
    }
    case DensityKind::kCurve: {
      const Vec3 r{e.radius, e.radius, e.radius};
      return {vmin(e.from, e.to) - r, vmax(e.from, e.to) + r};
    }
    case DensityKind::kSlab: {
      Aabb box = scene_bounds;
      box.min[e.axis] = e.lo;
      box.max[e.axis] = e.hi;
      return box;
    }
  }
  return scene_bounds;
}

Rgb EnvDefinition::eval(const Vec3& dir) const {
  switch (kind) {
    case EnvKind::kConstant:
      return color;
    case EnvKind::kGradient: {
      const double t = std::clamp(0.5 * (dir[axis] + 1.0), 0.0, 1.0);
      return low + (high - low) * t;
    }
    case EnvKind::kLobe: {
      const double c = std::max(0.0, dot(dir, direction));
      return color * std::pow(c, power);
    }
  }
  return {};
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
      ++no;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      std::istringstream fields(raw);
      Line line{no, {}};
      for (std::string tok; fields >> tok;) line.tokens.push_back(tok);
      if (!line.tokens.empty()) lines_.push_back(std::move(line));
    }
  }

  SceneDescription parse() {
    if (lines_.empty()) throw ParseError(0, "empty scene text");
    expect_open(lines_[0], "scene");
    pos_ = 1;
    SceneDescription scene;
    bool have_sharpness = false;
    bool have_material = false;
    bool have_env = false;
    bool have_surface = false;
    bool have_volume = false;
    while (true) {
      const Line& line = next("unterminated scene block");
      const std::string& kw = line.tokens[0];
      if (kw == "}") {
        if (line.tokens.size() != 1) throw ParseError(line.no, "unexpected tokens after '}'");
        break;
      }
      if (kw == "bounds") {
        Cursor c(line, 1);
        if (line.tokens.size() == 3) {
          const double a = c.number();
          const double b = c.number();
          scene.bounds = {{a, a, a}, {b, b, b}};
        } else if (line.tokens.size() == 7) {
          scene.bounds.min = c.vec3();
          scene.bounds.max = c.vec3();
        } else {
          throw ParseError(line.no, "bounds expects 2 or 6 numbers");
        }
        if (!(scene.bounds.min.x < scene.bounds.max.x && scene.bounds.min.y < scene.bounds.max.y &&
              scene.bounds.min.z < scene.bounds.max.z)) {
          throw ParseError(line.no, "bounds min must be below max");
        }
      } else if (kw == "sharpness") {
        Cursor c(line, 1);
        scene.sharpness = c.number();
        c.done();
        if (!(scene.sharpness > 0.0)) throw ParseError(line.no, "sharpness must be positive");
        have_sharpness = true;
      } else if (kw == "lut") {
        if (line.tokens.size() != 2) throw ParseError(line.no, "lut expects one kind");
        if (line.tokens[1] != "schlick") {
          throw ParseError(line.no, "unknown lut kind '" + line.tokens[1] + "'");
        }
        scene.lut = LutKind::kSchlick;
      } else if (kw == "surface") {
        expect_open(line, "surface");
        if (have_surface) throw ParseError(line.no, "duplicate surface block");
        have_surface = true;
        parse_surface(scene);
      } else if (kw == "volume") {
        expect_open(line, "volume");
        if (have_volume) throw ParseError(line.no, "duplicate volume block");
        have_volume = true;
        parse_volume(scene);
      } else if (kw == "material") {
        expect_open(line, "material");
        if (have_material) throw ParseError(line.no, "duplicate material block");
        have_material = true;
        parse_material(scene, line.no);
      } else if (kw == "env") {
        expect_open(line, "env");
        if (have_env) throw ParseError(line.no, "duplicate env block");
        have_env = true;
        parse_env(scene, line.no);
      } else {
        throw ParseError(line.no, "unknown keyword '" + kw + "'");
      }
    }
    if (pos_ != lines_.size()) throw ParseError(lines_[pos_].no, "content after scene block");
    const int last = lines_.back().no;
    if (!have_sharpness) throw ParseError(last, "missing required statement 'sharpness'");
    if (!have_material) throw ParseError(last, "missing required block 'material'");
    if (!have_env) throw ParseError(last, "missing required block 'env'");
    return scene;
  }

 private:
  struct Line {
    int no;
    std::vector<std::string> tokens;
  };

  class Cursor {
   public:
    Cursor(const Line& line, std::size_t start) : line_(line), i_(start) {}

    const std::string& word() {
      if (i_ >= line_.tokens.size()) throw ParseError(line_.no, "unexpected end of statement");
      return line_.tokens[i_++];
    }
    void keyword(std::string_view expected) {
      const std::string& w = word();
      if (w != expected) {
        throw ParseError(line_.no, "expected '" + std::string(expected) + "', got '" + w + "'");
      }
    }
    double number() {
      const std::string& w = word();
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
      if (ec != std::errc() || ptr != w.data() + w.size() || !std::isfinite(value)) {
        throw ParseError(line_.no, "expected a number, got '" + w + "'");
      }
      return value;
    }
    double positive(std::string_view what) {
      const double v = number();
      if (!(v > 0.0)) throw ParseError(line_.no, std::string(what) + " must be positive");
      return v;
    }
    double unit(std::string_view what) {
      const double v = number();
      if (!(v >= 0.0 && v <= 1.0)) throw ParseError(line_.no, std::string(what) + " out of [0,1]");
      return v;
    }
    Vec3 vec3() {
      const double x = number();
      const double y = number();
      const double z = number();
      return {x, y, z};
    }
    Rgb color() {
      const double r = unit("color component");
      const double g = unit("color component");
      const double b = unit("color component");
      return {r, g, b};
    }
    int axis() {
      const std::string& w = word();
      if (w == "x") return 0;
      if (w == "y") return 1;
      if (w == "z") return 2;
      throw ParseError(line_.no, "axis must be x, y or z, got '" + w + "'");
    }
    bool at_end() const { return i_ >= line_.tokens.size(); }
    void done() const {
      if (!at_end()) {
        throw ParseError(line_.no, "unexpected token '" + line_.tokens[i_] + "'");
      }
    }
    int line_no() const { return line_.no; }

   private:
    const Line& line_;
    std::size_t i_;
  };

  const Line& next(const char* eof_message) {
    if (pos_ >= lines_.size()) {
      throw ParseError(lines_.empty() ? 0 : lines_.back().no, eof_message);
    }
    return lines_[pos_++];
  }

  static void expect_open(const Line& line, std::string_view name) {
    if (line.tokens.size() != 2 || line.tokens[0] != name || line.tokens[1] != "{") {
      if (line.tokens[0] != name) {
        throw ParseError(line.no, "unknown keyword '" + line.tokens[0] + "'");
      }
      throw ParseError(line.no, "expected '" + std::string(name) + " {'");
    }
  }

  static CsgOp parse_op(Cursor& c) {
    if (c.at_end()) return CsgOp::kUnion;
    c.keyword("op");
    const std::string& w = c.word();
    if (w == "union") return CsgOp::kUnion;
    if (w == "intersect") return CsgOp::kIntersect;
    if (w == "subtract") return CsgOp::kSubtract;
    throw ParseError(c.line_no(), "unknown csg op '" + w + "'");
  }

  void parse_surface(SceneDescription& scene) {
    while (true) {
      const Line& line = next("unterminated surface block");
      if (line.tokens[0] == "}") return;
      if (line.tokens[0] != "primitive") {
        throw ParseError(line.no, "unknown keyword '" + line.tokens[0] + "'");
      }
      Cursor c(line, 1);
      const std::string& kind = c.word();
      Primitive p;
      if (kind == "sphere") {
        p.kind = PrimitiveKind::kSphere;
        c.keyword("center");
        p.center = c.vec3();
        c.keyword("radius");
        p.radius = c.positive("radius");
      } else if (kind == "box") {
        p.kind = PrimitiveKind::kBox;
        c.keyword("center");
        p.center = c.vec3();
        c.keyword("half");
        p.half_size.x = c.positive("box half size");
        p.half_size.y = c.positive("box half size");
        p.half_size.z = c.positive("box half size");
      } else if (kind == "torus") {
        p.kind = PrimitiveKind::kTorus;
        c.keyword("center");
        p.center = c.vec3();
        c.keyword("major");
        p.major = c.positive("torus major radius");
        c.keyword("minor");
        p.minor = c.positive("torus minor radius");
        if (p.minor >= p.major) throw ParseError(line.no, "torus minor radius must be < major");
      } else if (kind == "capsule") {
        p.kind = PrimitiveKind::kCapsule;
        c.keyword("from");
        p.from = c.vec3();
        c.keyword("to");
        p.to = c.vec3();
        c.keyword("radius");
        p.radius = c.positive("radius");
      } else {
        throw ParseError(line.no, "unknown keyword '" + kind + "' (primitive kind)");
      }
      p.op = parse_op(c);
      c.done();
      scene.surface.push_back(p);
    }
  }

  void parse_volume(SceneDescription& scene) {
    while (true) {
      const Line& line = next("unterminated volume block");
      const std::string& kw = line.tokens[0];
      if (kw == "}") return;
      Cursor c(line, 1);
      DensityElement e;
      if (kw == "blob") {
        e.kind = DensityKind::kBlob;
        c.keyword("center");
        e.center = c.vec3();
        c.keyword("radius");
        e.radius = c.positive("radius");
      } else if (kw == "curve") {
        e.kind = DensityKind::kCurve;
        c.keyword("from");
        e.from = c.vec3();
        c.keyword("to");
        e.to = c.vec3();
        c.keyword("radius");
        e.radius = c.positive("radius");
      } else if (kw == "slab") {
        e.kind = DensityKind::kSlab;
        c.keyword("axis");
        e.axis = c.axis();
        c.keyword("min");
        e.lo = c.number();
        c.keyword("max");
        e.hi = c.number();
        if (!(e.lo < e.hi)) throw ParseError(line.no, "slab min must be below max");
      } else {
        throw ParseError(line.no, "unknown keyword '" + kw + "'");
      }
      c.keyword("density");
      e.density = c.number();
      if (!(e.density >= 0.0)) throw ParseError(line.no, "density must be nonnegative");
      c.done();
      scene.volume.push_back(e);
    }
  }

  template <int N>
  static MaterialField<N> parse_field(Cursor& c, int line_no) {
    MaterialField<N> f;
    const std::string& kind = c.word();
    if (kind == "constant") {
      for (int i = 0; i < N; ++i) f.a[i] = c.unit("material value");
    } else if (kind == "checker") {
      f.kind = MaterialField<N>::Kind::kChecker;
      for (int i = 0; i < N; ++i) f.a[i] = c.unit("material value");
      for (int i = 0; i < N; ++i) f.b[i] = c.unit("material value");
      c.keyword("scale");
      f.scale = c.positive("checker scale");
    } else {
      throw ParseError(line_no, "unknown keyword '" + kind + "' (material pattern)");
    }
    c.done();
    return f;
  }

  void parse_material(SceneDescription& scene, int open_line) {
    bool have_diffuse = false;
    while (true) {
      const Line& line = next("unterminated material block");
      const std::string& kw = line.tokens[0];
      if (kw == "}") break;
      Cursor c(line, 1);
      if (kw == "diffuse") {
        scene.materials.diffuse = parse_field<3>(c, line.no);
        have_diffuse = true;
      } else if (kw == "tint") {
        scene.materials.tint = parse_field<3>(c, line.no);
      } else if (kw == "weights") {
        scene.materials.weights = parse_field<kBasisCount>(c, line.no);
      } else if (kw == "metallic") {
        scene.materials.metallic = parse_field<1>(c, line.no);
      } else {
        throw ParseError(line.no, "unknown keyword '" + kw + "'");
      }
    }
    if (!have_diffuse) throw ParseError(open_line, "material block needs a 'diffuse' statement");
  }

  void parse_env(SceneDescription& scene, int open_line) {
    std::array<bool, kBasisCount> seen{};
    while (true) {
      const Line& line = next("unterminated env block");
      const std::string& kw = line.tokens[0];
      if (kw == "}") break;
      if (kw != "map") throw ParseError(line.no, "unknown keyword '" + kw + "'");
      Cursor c(line, 1);
      const double index = c.number();
      if (index != std::floor(index) || index < 0 || index >= kBasisCount) {
        throw ParseError(line.no, "env map index must be 0.." + std::to_string(kBasisCount - 1));
      }
      const int i = int(index);
      if (seen[i]) throw ParseError(line.no, "duplicate env map " + std::to_string(i));
      seen[i] = true;
      EnvDefinition& env = scene.env[i];
      const std::string& kind = c.word();
      if (kind == "constant") {
        env.kind = EnvKind::kConstant;
        env.color = c.color();
      } else if (kind == "gradient") {
        env.kind = EnvKind::kGradient;
        c.keyword("axis");
        env.axis = c.axis();
        c.keyword("low");
        env.low = c.color();
        c.keyword("high");
        env.high = c.color();
      } else if (kind == "lobe") {
        env.kind = EnvKind::kLobe;
        c.keyword("dir");
        const Vec3 d = c.vec3();
        if (length(d) == 0.0) throw ParseError(line.no, "lobe direction must be nonzero");
        env.direction = normalize(d);
        c.keyword("power");
        env.power = c.positive("lobe power");
        c.keyword("color");
        env.color = c.color();
      } else {
        throw ParseError(line.no, "unknown keyword '" + kind + "' (env kind)");
      }
      c.done();
    }
    for (int i = 0; i < kBasisCount; ++i) {
      if (!seen[i]) {
        throw ParseError(open_line, "env block is missing map " + std::to_string(i));
      }
    }
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

SceneDescription parse_scene(std::string_view text) { return Parser(text).parse(); }

SceneDescription load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open scene file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

}  // namespace vmesh
