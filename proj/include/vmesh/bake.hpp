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

#include <vector>

#include "vmesh/assets.hpp"
#include "vmesh/camera.hpp"
#include "vmesh/scene.hpp"

namespace vmesh {

struct BakeOptions {
  int grid_n = 128;
  int block_b = 16;
  int mc_resolution = 256;
  double face_ratio = 0.25;
  int atlas_size = 1024;
  int env_edge = 512;
  int lut_size = 256;
  double prune_threshold = 0.01;
  /// Contribution cameras; empty selects default_contribution_cameras().
  std::vector<CameraPose> cameras;
  double contribution_step_scale = 0.5;
  double sigma_max = kDefaultSigmaMax;
};

/// Throws std::invalid_argument naming the offending option.
void validate_options(const BakeOptions& opts);

/// Ring of 20 poses, radius 2.5, elevation 20 degrees, 50 degree fov, 256 x 256.
std::vector<CameraPose> default_contribution_cameras();

struct BakeReport {
  std::size_t mc_faces = 0;
  std::size_t faces = 0;
  std::size_t vertices = 0;
  std::size_t density_voxels = 0;  // voxels with positive density before pruning
  std::size_t occupied_voxels = 0;
  std::size_t blocks = 0;
  int m_bar = 0;
  int r_bar = 0;
};

/// Intermediate float data kept alongside the quantized assets.
struct BakeResult {
  VMeshAssets assets;
  TextureMaps textures;
  Appearance appearance;
  SparseVolume volume;
  BakeReport report;
};

BakeResult bake(const SceneDescription& scene, const BakeOptions& opts);

}  // namespace vmesh
