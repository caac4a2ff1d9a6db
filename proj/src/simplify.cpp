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
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "vmesh/mesher.hpp"

namespace vmesh {

namespace {

/// Symmetric 4x4 quadric stored as its upper triangle.
struct Quadric {
  double a[10] = {};

  static Quadric from_plane(const Vec3& n, double d, double weight) {
    Quadric q;
    const double p[4] = {n.x, n.y, n.z, d};
    int idx = 0;
    for (int r = 0; r < 4; ++r) {
      for (int c = r; c < 4; ++c) q.a[idx++] = weight * p[r] * p[c];
    }
    return q;
  }
  Quadric& operator+=(const Quadric& o) {
    for (int i = 0; i < 10; ++i) a[i] += o.a[i];
    return *this;
  }
  // Index layout: 0:xx 1:xy 2:xz 3:xw 4:yy 5:yz 6:yw 7:zz 8:zw 9:ww
  double error(const Vec3& v) const {
    const double x = v.x, y = v.y, z = v.z;
    return a[0] * x * x + 2 * a[1] * x * y + 2 * a[2] * x * z + 2 * a[3] * x + a[4] * y * y +
           2 * a[5] * y * z + 2 * a[6] * y + a[7] * z * z + 2 * a[8] * z + a[9];
  }
  bool minimizer(Vec3& out) const {
    const double m00 = a[0], m01 = a[1], m02 = a[2], m11 = a[4], m12 = a[5], m22 = a[7];
    const double det = m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m12 * m02) +
                       m02 * (m01 * m12 - m11 * m02);
    const double scale = std::abs(m00) + std::abs(m11) + std::abs(m22);
    if (!(std::abs(det) > 1e-12 * scale * scale * scale) || scale == 0.0) return false;
    const double b0 = -a[3], b1 = -a[6], b2 = -a[8];
    const double inv = 1.0 / det;
    out.x = inv * (b0 * (m11 * m22 - m12 * m12) - m01 * (b1 * m22 - m12 * b2) +
                   m02 * (b1 * m12 - m11 * b2));
    out.y = inv * (m00 * (b1 * m22 - m12 * b2) - b0 * (m01 * m22 - m12 * m02) +
                   m02 * (m01 * b2 - b1 * m02));
    out.z = inv * (m00 * (m11 * b2 - b1 * m12) - m01 * (m01 * b2 - b1 * m02) +
                   b0 * (m01 * m12 - m11 * m02));
    return is_finite(out);
  }
};

struct Candidate {
  double cost;
  int u;
  int v;
  unsigned stamp_u;
  unsigned stamp_v;
  Vec3 target;

  bool operator>(const Candidate& o) const {
    if (cost != o.cost) return cost > o.cost;
    if (u != o.u) return u > o.u;
    return v > o.v;
  }
};

class Simplifier {
 public:
  explicit Simplifier(const TriMesh& mesh)
      : pos_(mesh.vertices),
        faces_(mesh.triangles),
        face_alive_(mesh.triangles.size(), true),
        vertex_faces_(mesh.vertices.size()),
        quadric_(mesh.vertices.size()),
        locked_(mesh.vertices.size(), false),
        stamp_(mesh.vertices.size(), 0),
        alive_faces_(mesh.triangles.size()) {
    std::unordered_map<unsigned long long, int> edge_use;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const Triangle& t = faces_[f];
      const Vec3 nrm = cross(pos_[t[1]] - pos_[t[0]], pos_[t[2]] - pos_[t[0]]);
      const double len = length(nrm);
      if (len > 0.0) {
        const Vec3 unit = nrm / len;
        const Quadric q = Quadric::from_plane(unit, -dot(unit, pos_[t[0]]), 0.5 * len);
        for (int k = 0; k < 3; ++k) quadric_[t[k]] += q;
      }
      for (int k = 0; k < 3; ++k) {
        vertex_faces_[t[k]].push_back(int(f));
        ++edge_use[edge_key(t[k], t[(k + 1) % 3])];
      }
    }
    for (const auto& [key, count] : edge_use) {
      if (count != 2) {
        locked_[key >> 32] = true;
        locked_[key & 0xffffffffULL] = true;
      }
    }
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const Triangle& t = faces_[f];
      for (int k = 0; k < 3; ++k) {
        const int a = t[k];
        const int b = t[(k + 1) % 3];
        if (a < b) push_candidate(a, b);
      }
    }
  }

  void run(std::size_t target_faces) {
    while (alive_faces_ > target_faces && !heap_.empty()) {
      const Candidate c = heap_.top();
      heap_.pop();
      if (!vertex_alive(c.u) || !vertex_alive(c.v)) continue;
      if (stamp_[c.u] != c.stamp_u || stamp_[c.v] != c.stamp_v) continue;
      // Keep the locked endpoint (if any) as the survivor.
      const int keep = locked_[c.v] ? c.v : c.u;
      const int drop = keep == c.u ? c.v : c.u;
      if (!collapse_allowed(keep, drop, c.target)) continue;
      collapse(keep, drop, c.target);
    }
  }

  TriMesh result() const {
    TriMesh out;
    std::vector<int> remap(pos_.size(), -1);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!face_alive_[f]) continue;
      Triangle t = faces_[f];
      for (int& i : t) {
        if (remap[i] < 0) {
          remap[i] = int(out.vertices.size());
          out.vertices.push_back(pos_[i]);
        }
        i = remap[i];
      }
      out.triangles.push_back(t);
    }
    return out;
  }

 private:
  static unsigned long long edge_key(int a, int b) {
    const unsigned lo = unsigned(std::min(a, b));
    const unsigned hi = unsigned(std::max(a, b));
    return (static_cast<unsigned long long>(lo) << 32) | hi;
  }

  bool vertex_alive(int v) const { return !vertex_faces_[v].empty(); }

  void push_candidate(int a, int b) {
    if (locked_[a] && locked_[b]) return;
    Quadric q = quadric_[a];
    q += quadric_[b];
    Vec3 target;
    if (locked_[a]) {
      target = pos_[a];
    } else if (locked_[b]) {
      target = pos_[b];
    } else if (!q.minimizer(target)) {
      const Vec3 mid = (pos_[a] + pos_[b]) * 0.5;
      target = pos_[a];
      double best = q.error(target);
      for (const Vec3& p : {pos_[b], mid}) {
        if (const double e = q.error(p); e < best) {
          best = e;
          target = p;
        }
      }
    }
    const double cost = std::max(q.error(target), 0.0);
    heap_.push({cost, std::min(a, b), std::max(a, b), stamp_[std::min(a, b)],
                stamp_[std::max(a, b)], target});
  }

  bool collapse_allowed(int keep, int drop, const Vec3& target) const {
    // Link condition: the common neighbours of keep and drop are exactly the apexes of the
    // faces shared by the edge.
    std::vector<int> shared_apex;
    std::vector<int> ring_keep;
    std::vector<int> ring_drop;
    for (int f : vertex_faces_[keep]) {
      const Triangle& t = faces_[f];
      const bool has_drop = t[0] == drop || t[1] == drop || t[2] == drop;
      for (int i : t) {
        if (i == keep || i == drop) continue;
        ring_keep.push_back(i);
        if (has_drop) shared_apex.push_back(i);
      }
    }
    for (int f : vertex_faces_[drop]) {
      for (int i : faces_[f]) {
        if (i != keep && i != drop) ring_drop.push_back(i);
      }
    }
    std::sort(ring_keep.begin(), ring_keep.end());
    ring_keep.erase(std::unique(ring_keep.begin(), ring_keep.end()), ring_keep.end());
    std::sort(ring_drop.begin(), ring_drop.end());
    ring_drop.erase(std::unique(ring_drop.begin(), ring_drop.end()), ring_drop.end());
    std::vector<int> common;
    std::set_intersection(ring_keep.begin(), ring_keep.end(), ring_drop.begin(), ring_drop.end(),
                          std::back_inserter(common));
    std::sort(shared_apex.begin(), shared_apex.end());
    if (shared_apex.empty() || common != shared_apex) return false;

    // Orientation check on every face that survives the collapse.
    for (int moved : {keep, drop}) {
      for (int f : vertex_faces_[moved]) {
        const Triangle& t = faces_[f];
        const bool has_keep = t[0] == keep || t[1] == keep || t[2] == keep;
        const bool has_drop = t[0] == drop || t[1] == drop || t[2] == drop;
        if (has_keep && has_drop) continue;
        Vec3 p[3];
        Vec3 q[3];
        for (int k = 0; k < 3; ++k) {
          p[k] = pos_[t[k]];
          q[k] = (t[k] == keep || t[k] == drop) ? target : p[k];
        }
        const Vec3 n_old = cross(p[1] - p[0], p[2] - p[0]);
        const Vec3 n_new = cross(q[1] - q[0], q[2] - q[0]);
        const double len_old = length(n_old);
        const double len_new = length(n_new);
        if (!(len_new > 2.0 * kDegenerateArea)) return false;
        if (len_old > 0.0 && dot(n_old, n_new) <= 1e-3 * len_old * len_new) return false;
      }
    }
    return true;
  }

  void collapse(int keep, int drop, const Vec3& target) {
    pos_[keep] = target;
    quadric_[keep] += quadric_[drop];
    for (int f : vertex_faces_[drop]) {
      if (!face_alive_[f]) continue;
      Triangle& t = faces_[f];
      const bool has_keep = t[0] == keep || t[1] == keep || t[2] == keep;
      if (has_keep) {
        face_alive_[f] = false;
        --alive_faces_;
        for (int i : t) {
          if (i != drop) std::erase(vertex_faces_[i], f);
        }
      } else {
        for (int& i : t) {
          if (i == drop) i = keep;
        }
        vertex_faces_[keep].push_back(f);
      }
    }
    vertex_faces_[drop].clear();
    ++stamp_[keep];
    std::vector<int> ring;
    for (int f : vertex_faces_[keep]) {
      for (int i : faces_[f]) {
        if (i != keep) ring.push_back(i);
      }
    }
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    for (int w : ring) push_candidate(keep, w);
  }

  std::vector<Vec3> pos_;
  std::vector<Triangle> faces_;
  std::vector<bool> face_alive_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<Quadric> quadric_;
  std::vector<bool> locked_;
  std::vector<unsigned> stamp_;
  std::size_t alive_faces_;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<Candidate>> heap_;
};

}  // namespace

TriMesh simplify(const TriMesh& mesh, double face_ratio) {
  if (!(face_ratio > 0.0 && face_ratio <= 1.0)) {
    throw std::invalid_argument("face_ratio must be in (0, 1]");
  }
  validate_mesh(mesh);
  if (face_ratio == 1.0 || mesh.triangles.empty()) return mesh;
  const auto target = static_cast<std::size_t>(std::floor(face_ratio * mesh.triangles.size()));
  Simplifier s(mesh);
  s.run(target);
  return s.result();
}

}  // namespace vmesh
