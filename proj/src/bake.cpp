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

#include "vmesh/bake.hpp"

#include <stdexcept>
#include <string>

#include "vmesh/mesher.hpp"
#include "vmesh/sparsevol.hpp"

namespace vmesh {

void validate_options(const BakeOptions& o) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  need(o.grid_n >= 2, "grid must be at least 2");
  need(o.block_b >= 2, "block must be at least 2");
  need(o.grid_n % o.block_b == 0, "grid must be a multiple of block");
  need(o.mc_resolution >= 2, "mc resolution must be at least 2");
  need(o.face_ratio > 0.0 && o.face_ratio <= 1.0, "faces must be in (0, 1]");
  need(o.atlas_size >= kMinBlockTexels, "atlas must be at least " + std::to_string(kMinBlockTexels));
  need(o.env_edge >= 2, "env edge must be at least 2");
  need(o.lut_size >= 2, "lut size must be at least 2");
  need(o.prune_threshold >= 0.0, "prune threshold must be >= 0");
  need(o.contribution_step_scale > 0.0 && o.contribution_step_scale <= 1.0,
       "contribution step scale must be in (0, 1]");
  need(o.sigma_max > 0.0, "sigma_max must be positive");
  for (const CameraPose& c : o.cameras) validate_camera(c);
}

std::vector<CameraPose> default_contribution_cameras() {
  return camera_ring(20, 2.5, 20.0, 50.0, 256, 256);
}

BakeResult bake(const SceneDescription& scene, const BakeOptions& opts) {
  validate_options(opts);
  BakeResult r;

  TriMesh mesh;
  if (!scene.surface.empty()) {
    const TriMesh full = marching_cubes(scene, opts.mc_resolution);
    r.report.mc_faces = full.triangles.size();
    mesh = simplify(full, opts.face_ratio);
  }
  if (!mesh.triangles.empty()) mesh = parametrize(mesh, opts.atlas_size);
  r.report.faces = mesh.triangles.size();
  r.report.vertices = mesh.vertices.size();
  r.textures = bake_textures(mesh, scene, opts.atlas_size);
  r.appearance = bake_appearance(scene, opts.env_edge, opts.lut_size);

  const VoxelGrid grid = voxelize(scene, opts.grid_n);
  r.report.density_voxels = grid.occupied.size();
  const std::vector<CameraPose> cams =
      opts.cameras.empty() ? default_contribution_cameras() : opts.cameras;
  const std::vector<double> contrib =
      compute_contributions(grid, mesh, cams, opts.contribution_step_scale);
  r.volume = pack_blocks(prune(grid, contrib, opts.prune_threshold, opts.block_b), grid);
  r.report.occupied_voxels = r.volume.occupied.size();
  r.report.blocks = r.volume.blocks.size();

  PshTable psh;
  if (!r.volume.blocks.empty()) {
    std::vector<IVec3> coords;
    for (const Brick& b : r.volume.blocks) coords.push_back(b.coord);
    psh = psh_build(coords, r.volume.blocks_per_axis());
    r.report.m_bar = psh.m_bar;
    r.report.r_bar = psh.r_bar;
  }
  r.assets = make_assets(scene.bounds, mesh, r.textures, r.appearance, r.volume, psh, opts.sigma_max);
  return r;
}

}  // namespace vmesh
