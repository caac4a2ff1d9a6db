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

#include "vmesh/mesh.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace vmesh {

void validate_mesh(const TriMesh& mesh) {
  const int n = int(mesh.vertices.size());
  for (const Triangle& t : mesh.triangles) {
    for (int i : t) {
      if (i < 0 || i >= n) throw std::invalid_argument("triangle index out of range");
    }
  }
  if (!mesh.uvs.empty() && mesh.uvs.size() != mesh.triangles.size()) {
    throw std::invalid_argument("mesh UV set does not cover every triangle");
  }
}

double triangle_area(const TriMesh& mesh, int tri) {
  const Triangle& t = mesh.triangles[tri];
  const Vec3& a = mesh.vertices[t[0]];
  return 0.5 * length(cross(mesh.vertices[t[1]] - a, mesh.vertices[t[2]] - a));
}

Vec3 triangle_normal(const TriMesh& mesh, int tri) {
  const Triangle& t = mesh.triangles[tri];
  const Vec3& a = mesh.vertices[t[0]];
  return normalize(cross(mesh.vertices[t[1]] - a, mesh.vertices[t[2]] - a));
}

MeshTopology mesh_topology(const TriMesh& mesh) {
  std::unordered_map<unsigned long long, int> edge_use;
  std::unordered_set<int> used;
  for (const Triangle& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const unsigned a = unsigned(t[k]);
      const unsigned b = unsigned(t[(k + 1) % 3]);
      const unsigned long long key = (static_cast<unsigned long long>(std::min(a, b)) << 32) |
                                     std::max(a, b);
      ++edge_use[key];
      used.insert(t[k]);
    }
  }
  MeshTopology topo;
  topo.vertices = static_cast<long long>(used.size());
  topo.edges = static_cast<long long>(edge_use.size());
  topo.faces = static_cast<long long>(mesh.triangles.size());
  for (const auto& [key, count] : edge_use) {
    if (count == 1) ++topo.boundary_edges;
    if (count > 2) ++topo.nonmanifold_edges;
  }
  return topo;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

double parse_double(std::string_view tok, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw std::runtime_error("obj line " + std::to_string(line) + ": bad number '" +
                             std::string(tok) + "'");
  }
  return v;
}

int parse_index(std::string_view tok, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 1) {
    throw std::runtime_error("obj line " + std::to_string(line) + ": bad index '" +
                             std::string(tok) + "'");
  }
  return v - 1;
}

}  // namespace

std::string format_obj(const TriMesh& mesh) {
  validate_mesh(mesh);
  std::string out;
  out.reserve(mesh.vertices.size() * 48 + mesh.triangles.size() * 80);
  out += "# vmesh\n";
  for (const Vec3& v : mesh.vertices) {
    out += "v ";
    append_number(out, v.x);
    out += ' ';
    append_number(out, v.y);
    out += ' ';
    append_number(out, v.z);
    out += '\n';
  }
  for (const TriangleUv& uv : mesh.uvs) {
    for (const Vec2& c : uv) {
      out += "vt ";
      append_number(out, c.u);
      out += ' ';
      append_number(out, c.v);
      out += '\n';
    }
  }
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    out += 'f';
    for (int k = 0; k < 3; ++k) {
      out += ' ';
      out += std::to_string(mesh.triangles[i][k] + 1);
      if (mesh.has_uvs()) {
        out += '/';
        out += std::to_string(i * 3 + k + 1);
      }
    }
    out += '\n';
  }
  return out;
}

TriMesh parse_obj(std::string_view text) {
  TriMesh mesh;
  std::vector<Vec2> texcoords;
  std::vector<std::array<int, 3>> face_uv;
  bool any_uv = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream fields(raw);
    std::string kind;
    if (!(fields >> kind) || kind[0] == '#') continue;
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (kind == "v") {
      if (tok.size() < 3) throw std::runtime_error("obj line " + std::to_string(line_no) + ": v");
      mesh.vertices.push_back({parse_double(tok[0], line_no), parse_double(tok[1], line_no),
                               parse_double(tok[2], line_no)});
    } else if (kind == "vt") {
      if (tok.size() < 2) throw std::runtime_error("obj line " + std::to_string(line_no) + ": vt");
      texcoords.push_back({parse_double(tok[0], line_no), parse_double(tok[1], line_no)});
    } else if (kind == "f") {
      if (tok.size() != 3) {
        throw std::runtime_error("obj line " + std::to_string(line_no) +
                                 ": only triangles are supported");
      }
      Triangle t{};
      std::array<int, 3> uv{-1, -1, -1};
      for (int k = 0; k < 3; ++k) {
        const std::string& f = tok[k];
        const auto slash = f.find('/');
        t[k] = parse_index(std::string_view(f).substr(0, slash), line_no);
        if (slash != std::string::npos) {
          const auto rest = std::string_view(f).substr(slash + 1);
          const auto slash2 = rest.find('/');
          const auto vt = rest.substr(0, slash2);
          if (!vt.empty()) {
            uv[k] = parse_index(vt, line_no);
            any_uv = true;
          }
        }
      }
      mesh.triangles.push_back(t);
      face_uv.push_back(uv);
    }
  }
  if (any_uv) {
    for (std::size_t i = 0; i < face_uv.size(); ++i) {
      TriangleUv uv;
      for (int k = 0; k < 3; ++k) {
        const int idx = face_uv[i][k];
        if (idx < 0 || idx >= int(texcoords.size())) {
          throw std::runtime_error("obj face " + std::to_string(i) + ": missing texture index");
        }
        uv[k] = texcoords[idx];
      }
      mesh.uvs.push_back(uv);
    }
  }
  validate_mesh(mesh);
  return mesh;
}

void write_obj(const std::filesystem::path& path, const TriMesh& mesh) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  const std::string text = format_obj(mesh);
  out.write(text.data(), std::streamsize(text.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

TriMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_obj(buf.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace vmesh
