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
#include <cstdint>
#include <span>
#include <vector>

#include "vmesh/camera.hpp"
#include "vmesh/mesh.hpp"
#include "vmesh/scene.hpp"

namespace vmesh {

struct VoxelRecord {
  double density = 0.0;
  Vec3 normal{0.0, 0.0, 1.0};
  Rgb diffuse;
  Rgb tint;
  std::array<double, kBasisCount> weights{};
  double metallic = 0.0;

  friend bool operator==(const VoxelRecord&, const VoxelRecord&) = default;
};

/// Voxel sampling lattice per axis (4 x 4 x 4 = 64 samples per voxel).
inline constexpr int kVoxelSamplesPerAxis = 4;

/// Dense voxelization. Densities are stored for every voxel; full records only for voxels with
/// positive density (all others are the default record with density 0).
struct VoxelGrid {
  int grid_n = 0;
  Aabb bounds;
  std::vector<double> density;          // grid_n^3, index x + n (y + n z)
  std::vector<std::uint32_t> occupied;  // ascending indices with density > 0
  std::vector<VoxelRecord> records;     // aligned with `occupied`

  double voxel_edge() const { return (bounds.max.x - bounds.min.x) / grid_n; }
  std::size_t voxel_count() const { return std::size_t(grid_n) * grid_n * grid_n; }
  std::uint32_t index(const IVec3& v) const {
    return std::uint32_t(v.x + grid_n * (v.y + grid_n * v.z));
  }
  IVec3 coord(std::uint32_t index) const {
    return {int(index % grid_n), int((index / grid_n) % grid_n), int(index / (grid_n * grid_n))};
  }
  /// Voxel containing x, clamped to the grid.
  IVec3 locate(const Vec3& x) const;
  /// Position of `index` in `records`, or -1 for a zero-density voxel.
  int record_slot(std::uint32_t index) const;
  VoxelRecord record(std::uint32_t index) const;
};

/// 4x4x4 stratified samples per voxel: mean density, density-weighted normal and materials.
/// Only voxels overlapping some element's support are sampled; the rest have density 0.
VoxelGrid voxelize(const SceneDescription& scene, int grid_n);

/// Sum of n values by pairwise halving; n must be a power of two.
double pairwise_sum(std::span<const double> values);

/// Uniform march segments over [t0, t1): segment i spans [t0 + i h, min(t0 + (i+1) h, t1)] and
/// is sampled at its midpoint.
struct MarchSegment {
  double t_mid;
  double delta;
};
std::vector<MarchSegment> march_segments(double t0, double t1, double step);

/// Max over all camera pixel rays of the sample weight T_i alpha_i in each positive-density
/// voxel (aligned with grid.records). Rays end at the nearest front-facing mesh hit.
std::vector<double> compute_contributions(const VoxelGrid& grid, const TriMesh& mesh,
                                          std::span<const CameraPose> cameras, double step_scale);

/// Block of B^3 voxel records, index x + B (y + B z) inside the block.
struct Brick {
  IVec3 coord;
  std::vector<VoxelRecord> voxels;
  friend bool operator==(const Brick&, const Brick&) = default;
};

struct SparseVolume {
  int grid_n = 0;
  int block_b = 16;
  Aabb bounds;
  std::vector<std::uint32_t> occupied;  // ascending voxel indices
  std::vector<Brick> blocks;            // ascending block index x + nb (y + nb z)

  int blocks_per_axis() const { return grid_n / block_b; }
  double voxel_edge() const { return (bounds.max.x - bounds.min.x) / grid_n; }
  friend bool operator==(const SparseVolume&, const SparseVolume&) = default;
};

/// Keeps voxels with density > 0 and contribution >= threshold.
SparseVolume prune(const VoxelGrid& grid, std::span<const double> contributions, double threshold,
                   int block_b);

/// Fills one brick per block containing an occupied voxel. Unoccupied voxels of a brick keep
/// density 0 (their other channels are the default record).
SparseVolume pack_blocks(SparseVolume sparse, const VoxelGrid& grid);

IVec3 block_of(const IVec3& voxel, int block_b);
int intra_block_index(const IVec3& voxel, int block_b);

/// grid_n^3 bits, bit x + n (y + n z), eight per byte, least significant bit first.
std::vector<std::uint8_t> build_occupancy(const SparseVolume& sparse);
inline bool occupancy_bit(std::span<const std::uint8_t> bits, std::size_t index) {
  return (bits[index >> 3] >> (index & 7)) & 1u;
}

}  // namespace vmesh
