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

#include "vmesh/sparsevol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vmesh/field.hpp"
#include "vmesh/raster.hpp"

namespace vmesh {

IVec3 VoxelGrid::locate(const Vec3& x) const {
  const double edge = voxel_edge();
  IVec3 v;
  int* out[3] = {&v.x, &v.y, &v.z};
  for (int a = 0; a < 3; ++a) {
    const double f = std::floor((x[a] - bounds.min[a]) / edge);
    *out[a] = int(std::clamp(f, 0.0, double(grid_n - 1)));
  }
  return v;
}

int VoxelGrid::record_slot(std::uint32_t index) const {
  const auto it = std::lower_bound(occupied.begin(), occupied.end(), index);
  if (it == occupied.end() || *it != index) return -1;
  return int(it - occupied.begin());
}

VoxelRecord VoxelGrid::record(std::uint32_t index) const {
  const int slot = record_slot(index);
  return slot < 0 ? VoxelRecord{} : records[slot];
}

double pairwise_sum(std::span<const double> values) {
  std::vector<double> buf(values.begin(), values.end());
  if (buf.empty()) return 0.0;
  if ((buf.size() & (buf.size() - 1)) != 0) {
    throw std::invalid_argument("pairwise_sum expects a power-of-two count");
  }
  for (std::size_t n = buf.size(); n > 1; n /= 2) {
    for (std::size_t i = 0; i < n / 2; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
  }
  return buf[0];
}

VoxelGrid voxelize(const SceneDescription& scene, int grid_n) {
  if (grid_n < 1) throw std::invalid_argument("grid_n must be positive");
  VoxelGrid grid;
  grid.grid_n = grid_n;
  grid.bounds = scene.bounds;
  grid.density.assign(grid.voxel_count(), 0.0);
  const double edge = grid.voxel_edge();

  std::vector<std::uint8_t> candidate(grid.voxel_count(), 0);
  for (const DensityElement& e : scene.volume) {
    const Aabb support = element_support(e, scene.bounds);
    int lo[3];
    int hi[3];
    for (int a = 0; a < 3; ++a) {
      lo[a] = int(std::clamp(std::floor((support.min[a] - scene.bounds.min[a]) / edge) - 1.0, 0.0,
                             double(grid_n - 1)));
      hi[a] = int(std::clamp(std::ceil((support.max[a] - scene.bounds.min[a]) / edge), 0.0,
                             double(grid_n - 1)));
    }
    for (int z = lo[2]; z <= hi[2]; ++z) {
      for (int y = lo[1]; y <= hi[1]; ++y) {
        for (int x = lo[0]; x <= hi[0]; ++x) candidate[grid.index({x, y, z})] = 1;
      }
    }
  }

  constexpr int k = kVoxelSamplesPerAxis;
  constexpr int samples = k * k * k;
  std::array<Vec3, samples> pos;
  std::array<double, samples> sigma;
  for (std::uint32_t idx = 0; idx < grid.voxel_count(); ++idx) {
    if (!candidate[idx]) continue;
    const IVec3 v = grid.coord(idx);
    bool any = false;
    int s = 0;
    for (int c = 0; c < k; ++c) {
      for (int b = 0; b < k; ++b) {
        for (int a = 0; a < k; ++a, ++s) {
          pos[s] = {scene.bounds.min.x + edge * (v.x + (a + 0.5) / k),
                    scene.bounds.min.y + edge * (v.y + (b + 0.5) / k),
                    scene.bounds.min.z + edge * (v.z + (c + 0.5) / k)};
          sigma[s] = density_eval(scene, pos[s]);
          any = any || sigma[s] > 0.0;
        }
      }
    }
    if (!any) continue;
    const double total = pairwise_sum(sigma);
    const double mean = total / samples;
    if (!(mean > 0.0)) continue;

    VoxelRecord rec;
    rec.density = mean;
    Vec3 normal_sum;
    for (int i = 0; i < samples; ++i) {
      if (sigma[i] <= 0.0) continue;
      const Vec3 n = sdf_gradient(scene, pos[i]).normal;
      const MaterialSample m = material_eval(scene, pos[i], n);
      const double w = sigma[i] / total;
      normal_sum += n * sigma[i];
      rec.diffuse += m.diffuse * w;
      rec.tint += m.tint * w;
      for (int j = 0; j < kBasisCount; ++j) rec.weights[j] += m.weights[j] * w;
      rec.metallic += m.metallic * w;
    }
    const double len = length(normal_sum);
    rec.normal = len > 0.0 ? normal_sum / len : Vec3{0.0, 0.0, 1.0};
    rec.diffuse = clamp01(rec.diffuse);
    rec.tint = clamp01(rec.tint);
    for (double& w : rec.weights) w = std::clamp(w, 0.0, 1.0);
    rec.metallic = std::clamp(rec.metallic, 0.0, 1.0);

    grid.density[idx] = mean;
    grid.occupied.push_back(idx);
    grid.records.push_back(rec);
  }
  return grid;
}

std::vector<MarchSegment> march_segments(double t0, double t1, double step) {
  std::vector<MarchSegment> out;
  if (!(t1 > t0) || !(step > 0.0)) return out;
  for (long long i = 0;; ++i) {
    const double a = t0 + step * double(i);
    if (!(a < t1)) break;
    const double b = std::min(a + step, t1);
    out.push_back({0.5 * (a + b), b - a});
  }
  return out;
}

std::vector<double> compute_contributions(const VoxelGrid& grid, const TriMesh& mesh,
                                          std::span<const CameraPose> cameras, double step_scale) {
  if (cameras.empty()) throw std::invalid_argument("compute_contributions needs cameras");
  if (!(step_scale > 0.0 && step_scale <= 1.0)) {
    throw std::invalid_argument("step_scale must be in (0, 1]");
  }
  std::vector<double> contrib(grid.records.size(), 0.0);
  if (grid.records.empty()) return contrib;
  const double step = grid.voxel_edge() * step_scale;

  for (const CameraPose& cam : cameras) {
    const std::vector<RasterHit> hits = rasterize_triangles(mesh, cam);
    const CameraFrame frame = camera_frame(cam);
    for (int py = 0; py < cam.height; ++py) {
      for (int px = 0; px < cam.width; ++px) {
        const Ray ray = camera_ray(cam, frame, px, py);
        const auto box = ray_box_intersect(ray, grid.bounds);
        if (!box) continue;
        double t_end = box->t_far;
        const RasterHit& hit = hits[std::size_t(py) * cam.width + px];
        if (hit.covered()) t_end = std::min(t_end, hit.t);
        double transmittance = 1.0;
        for (const MarchSegment& seg : march_segments(box->t_near, t_end, step)) {
          const std::uint32_t idx = grid.index(grid.locate(ray.at(seg.t_mid)));
          const double sigma = grid.density[idx];
          if (sigma <= 0.0) continue;
          const double alpha = -std::expm1(-sigma * seg.delta);
          const double w = transmittance * alpha;
          const int slot = grid.record_slot(idx);
          contrib[slot] = std::max(contrib[slot], w);
          transmittance *= 1.0 - alpha;
        }
      }
    }
  }
  return contrib;
}

IVec3 block_of(const IVec3& voxel, int block_b) {
  return {voxel.x / block_b, voxel.y / block_b, voxel.z / block_b};
}

int intra_block_index(const IVec3& voxel, int block_b) {
  return voxel.x % block_b + block_b * (voxel.y % block_b + block_b * (voxel.z % block_b));
}

SparseVolume prune(const VoxelGrid& grid, std::span<const double> contributions, double threshold,
                   int block_b) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("prune threshold must be >= 0");
  if (contributions.size() != grid.records.size()) {
    throw std::invalid_argument("contribution count does not match the voxel records");
  }
  if (block_b < 1 || grid.grid_n % block_b != 0) {
    throw std::invalid_argument("grid_n must be a multiple of the block size");
  }
  SparseVolume sparse;
  sparse.grid_n = grid.grid_n;
  sparse.block_b = block_b;
  sparse.bounds = grid.bounds;
  for (std::size_t i = 0; i < grid.records.size(); ++i) {
    const double c = contributions[i];
    if (grid.records[i].density > 0.0 && c >= threshold) {
      sparse.occupied.push_back(grid.occupied[i]);
    }
  }
  return sparse;
}

SparseVolume pack_blocks(SparseVolume sparse, const VoxelGrid& grid) {
  const int b = sparse.block_b;
  const int nb = sparse.blocks_per_axis();
  auto block_index = [nb](const IVec3& c) { return c.x + nb * (c.y + nb * c.z); };
  std::vector<int> order;
  for (std::uint32_t idx : sparse.occupied) order.push_back(block_index(block_of(grid.coord(idx), b)));
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  sparse.blocks.clear();
  sparse.blocks.reserve(order.size());
  for (int bi : order) {
    Brick brick;
    brick.coord = {bi % nb, (bi / nb) % nb, bi / (nb * nb)};
    brick.voxels.assign(std::size_t(b) * b * b, VoxelRecord{});
    sparse.blocks.push_back(std::move(brick));
  }
  for (std::uint32_t idx : sparse.occupied) {
    const IVec3 v = grid.coord(idx);
    const int bi = block_index(block_of(v, b));
    const auto it = std::lower_bound(order.begin(), order.end(), bi);
    sparse.blocks[it - order.begin()].voxels[intra_block_index(v, b)] = grid.record(idx);
  }
  return sparse;
}

std::vector<std::uint8_t> build_occupancy(const SparseVolume& sparse) {
  const std::size_t bits = std::size_t(sparse.grid_n) * sparse.grid_n * sparse.grid_n;
  std::vector<std::uint8_t> bytes((bits + 7) / 8, 0);
  for (std::uint32_t idx : sparse.occupied) bytes[idx >> 3] |= std::uint8_t(1u << (idx & 7));
  return bytes;
}

}  // namespace vmesh
