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

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vmesh/bake.hpp"
#include "vmesh/reference.hpp"
#include "vmesh/renderer.hpp"

namespace fs = std::filesystem;
using namespace vmesh;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.png", i);
  return buf;
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with("frame_") && name.ends_with(".png")) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void print_storage(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::uintmax_t total = 0;
  for (const fs::path& f : files) {
    const auto size = fs::file_size(f);
    total += size;
    std::printf("  %-24s %10ju bytes\n", f.filename().string().c_str(), size);
  }
  std::printf("  %-24s %10ju bytes\n", "total", total);
}

void apply_size(std::vector<CameraPose>& cams, int width, int height) {
  for (CameraPose& c : cams) {
    if (width > 0) c.width = width;
    if (height > 0) c.height = height;
  }
}

struct BakeArgs {
  std::string scene;
  std::string out;
  std::string cams;
  BakeOptions opts;
};

int run_bake(const BakeArgs& a) {
  SceneDescription scene;
  BakeOptions opts = a.opts;
  try {
    scene = load_scene(a.scene);
    if (!a.cams.empty()) opts.cameras = load_camera_path(a.cams);
    validate_options(opts);
  } catch (const std::exception& e) {
    std::cerr << "vmesh bake: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto start = Clock::now();
  try {
    const BakeResult r = bake(scene, opts);
    save_container(r.assets, a.out);
    const BakeReport& rep = r.report;
    const double voxels = double(opts.grid_n) * opts.grid_n * opts.grid_n;
    std::printf("baked %s -> %s in %.1f s\n", a.scene.c_str(), a.out.c_str(), ms_since(start) / 1e3);
    std::printf("  mesh: %zu faces (%zu before simplification), %zu vertices\n", rep.faces,
                rep.mc_faces, rep.vertices);
    std::printf("  volume: %zu occupied voxels of %zu with density (%.4f%% of grid %d^3)\n",
                rep.occupied_voxels, rep.density_voxels, 100.0 * rep.occupied_voxels / voxels,
                opts.grid_n);
    std::printf("  blocks: %zu, m_bar %d, r_bar %d\n", rep.blocks, rep.m_bar, rep.r_bar);
    print_storage(a.out);
  } catch (const std::exception& e) {
    std::cerr << "vmesh bake: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct RenderArgs {
  std::string assets;
  std::string cams;
  std::string out;
  double step = 0.5;
  int width = 0;
  int height = 0;
};

int run_render(const RenderArgs& a) {
  VMeshAssets assets;
  std::vector<CameraPose> cams;
  RenderConfig cfg;
  cfg.step_scale = a.step;
  try {
    validate_config(cfg);
    assets = load_container(a.assets);
    cams = load_camera_path(a.cams);
    apply_size(cams, a.width, a.height);
    for (const CameraPose& c : cams) validate_camera(c);
    fs::create_directories(a.out);
  } catch (const std::exception& e) {
    std::cerr << "vmesh render: " << e.what() << "\n";
    return kExitUsage;
  }
  const Renderer renderer(assets);
  double total = 0.0;
  for (std::size_t i = 0; i < cams.size(); ++i) {
    const auto start = Clock::now();
    const ImageRGBA frame = renderer.render_frame(cams[i], cfg);
    const double ms = ms_since(start);
    total += ms;
    try {
      write_png(fs::path(a.out) / frame_name(i), frame.to_image8());
    } catch (const std::exception& e) {
      std::cerr << "vmesh render: " << e.what() << "\n";
      return kExitFailure;
    }
    std::printf("%s %.1f ms\n", frame_name(i).c_str(), ms);
  }
  std::printf("mean %.1f ms over %zu frames\n", cams.empty() ? 0.0 : total / cams.size(), cams.size());
  return kExitOk;
}

struct ReferenceArgs {
  std::string scene;
  std::string cams;
  std::string out;
  int steps = kDefaultReferenceSteps;
  int env = 512;
  int lut = 256;
  int width = 0;
  int height = 0;
};

int run_reference(const ReferenceArgs& a) {
  SceneDescription scene;
  std::vector<CameraPose> cams;
  try {
    scene = load_scene(a.scene);
    cams = load_camera_path(a.cams);
    apply_size(cams, a.width, a.height);
    for (const CameraPose& c : cams) validate_camera(c);
    if (a.steps < 2) throw std::invalid_argument("steps must be at least 2");
    fs::create_directories(a.out);
  } catch (const std::exception& e) {
    std::cerr << "vmesh reference: " << e.what() << "\n";
    return kExitUsage;
  }
  const Appearance app = bake_appearance(scene, a.env, a.lut);
  for (std::size_t i = 0; i < cams.size(); ++i) {
    const auto start = Clock::now();
    const ImageRGBA frame = render_reference(scene, cams[i], a.steps, app);
    write_png(fs::path(a.out) / frame_name(i), frame.to_image8());
    std::printf("%s %.1f ms\n", frame_name(i).c_str(), ms_since(start));
  }
  return kExitOk;
}

int run_validate(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    std::cerr << "vmesh validate: " << dir << " is not a directory\n";
    return kExitUsage;
  }
  const ContainerInspection r = inspect_container(dir);
  for (const std::string& f : r.failures) std::printf("FAIL %s\n", f.c_str());
  if (!r.failures.empty()) return kExitFailure;
  std::printf("PASS %s\n", dir.c_str());
  return kExitOk;
}

int run_compare(const std::string& dir_a, const std::string& dir_b, double min_psnr) {
  std::vector<fs::path> fa, fb;
  try {
    fa = list_frames(dir_a);
    fb = list_frames(dir_b);
  } catch (const std::exception& e) {
    std::cerr << "vmesh compare: " << e.what() << "\n";
    return kExitUsage;
  }
  if (fa.empty() || fa.size() != fb.size()) {
    std::cerr << "vmesh compare: frame counts differ (" << fa.size() << " vs " << fb.size() << ")\n";
    return kExitUsage;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (fa[i].filename() != fb[i].filename()) {
      std::cerr << "vmesh compare: frame names differ: " << fa[i].filename() << " vs "
                << fb[i].filename() << "\n";
      return kExitUsage;
    }
    double p = 0.0;
    try {
      p = psnr(ImageRGBA::from_image8(read_png(fa[i])), ImageRGBA::from_image8(read_png(fb[i])));
    } catch (const std::exception& e) {
      std::cerr << "vmesh compare: " << fa[i].filename().string() << ": " << e.what() << "\n";
      return kExitUsage;
    }
    sum += p;
    std::printf("%s %.4f dB\n", fa[i].filename().string().c_str(), p);
  }
  const double mean = sum / fa.size();
  std::printf("mean %.4f dB over %zu frames\n", mean, fa.size());
  return mean >= min_psnr ? kExitOk : kExitFailure;
}

int run_info(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    std::cerr << "vmesh info: " << dir << " is not a directory\n";
    return kExitUsage;
  }
  const ContainerInspection r = inspect_container(dir);
  if (!r.loaded) {
    for (const std::string& f : r.failures) std::cerr << "vmesh info: " << f << "\n";
    return kExitUsage;
  }
  const VMeshAssets& a = r.assets;
  const VolumeAssets& v = a.volume;
  const double voxels = double(v.grid_n) * v.grid_n * v.grid_n;
  std::printf("container %s (version %d)\n", dir.c_str(), kAssetsVersion);
  std::printf("  mesh: %zu vertices, %zu faces, atlas %d\n", a.mesh.vertices.size(),
              a.mesh.triangles.size(), a.atlas_size());
  std::printf("  env: %d maps, edge %d; lut %d\n", kBasisCount, a.env_edge(), a.lut.image.width);
  std::printf("  volume: grid %d, block %d, %zu blocks, m_bar %d, r_bar %d\n", v.grid_n, v.block_b,
              v.block_coords.size(), v.psh.m_bar, v.psh.r_bar);
  std::printf("  occupied voxels: %zu (sparsity %.4f%%)\n", v.occupied_voxels,
              100.0 * v.occupied_voxels / voxels);
  std::printf("  storage:\n");
  print_storage(dir);
  for (const std::string& f : r.failures) std::printf("  warning: %s\n", f.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid volume-mesh baking and rendering"};
  app.require_subcommand(1);

  BakeArgs bake_args;
  auto* bake_cmd = app.add_subcommand("bake", "Bake a scene into an asset container");
  bake_cmd->add_option("scene", bake_args.scene, "Scene description file")->required();
  bake_cmd->add_option("out", bake_args.out, "Output container directory")->required();
  bake_cmd->add_option("--grid", bake_args.opts.grid_n, "Voxel grid resolution")->capture_default_str();
  bake_cmd->add_option("--block", bake_args.opts.block_b, "Block edge in voxels")->capture_default_str();
  bake_cmd->add_option("--mc", bake_args.opts.mc_resolution, "Marching cubes resolution")
      ->capture_default_str();
  bake_cmd->add_option("--faces", bake_args.opts.face_ratio, "Kept face fraction")->capture_default_str();
  bake_cmd->add_option("--atlas", bake_args.opts.atlas_size, "Texture atlas size")->capture_default_str();
  bake_cmd->add_option("--env", bake_args.opts.env_edge, "Cube map edge")->capture_default_str();
  bake_cmd->add_option("--lut", bake_args.opts.lut_size, "Attenuation LUT size")->capture_default_str();
  bake_cmd->add_option("--prune", bake_args.opts.prune_threshold, "Contribution threshold")
      ->capture_default_str();
  bake_cmd->add_option("--cams", bake_args.cams, "Camera path for contribution rays");

  RenderArgs render_args;
  auto* render_cmd = app.add_subcommand("render", "Render a container along a camera path");
  render_cmd->add_option("assets", render_args.assets, "Container directory")->required();
  render_cmd->add_option("campath", render_args.cams, "Camera path file")->required();
  render_cmd->add_option("out", render_args.out, "Output frame directory")->required();
  render_cmd->add_option("--step", render_args.step, "March step in voxel edges")->capture_default_str();
  render_cmd->add_option("--width", render_args.width, "Override frame width");
  render_cmd->add_option("--height", render_args.height, "Override frame height");

  ReferenceArgs ref_args;
  auto* ref_cmd = app.add_subcommand("reference", "Render a scene with the brute-force oracle");
  ref_cmd->add_option("scene", ref_args.scene, "Scene description file")->required();
  ref_cmd->add_option("campath", ref_args.cams, "Camera path file")->required();
  ref_cmd->add_option("out", ref_args.out, "Output frame directory")->required();
  ref_cmd->add_option("--steps", ref_args.steps, "Samples per ray")->capture_default_str();
  ref_cmd->add_option("--env", ref_args.env, "Cube map edge")->capture_default_str();
  ref_cmd->add_option("--lut", ref_args.lut, "Attenuation LUT size")->capture_default_str();
  ref_cmd->add_option("--width", ref_args.width, "Override frame width");
  ref_cmd->add_option("--height", ref_args.height, "Override frame height");

  std::string validate_dir;
  auto* validate_cmd = app.add_subcommand("validate", "Check container invariants");
  validate_cmd->add_option("assets", validate_dir, "Container directory")->required();

  std::string cmp_a, cmp_b;
  double min_psnr = 0.0;
  auto* compare_cmd = app.add_subcommand("compare", "PSNR between two frame directories");
  compare_cmd->add_option("a", cmp_a, "First frame directory")->required();
  compare_cmd->add_option("b", cmp_b, "Second frame directory")->required();
  compare_cmd->add_option("--min-psnr", min_psnr, "Required mean PSNR in dB")->capture_default_str();

  std::string info_dir;
  auto* info_cmd = app.add_subcommand("info", "Summarize a container");
  info_cmd->add_option("assets", info_dir, "Container directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*bake_cmd) return run_bake(bake_args);
  if (*render_cmd) return run_render(render_args);
  if (*ref_cmd) return run_reference(ref_args);
  if (*validate_cmd) return run_validate(validate_dir);
  if (*compare_cmd) return run_compare(cmp_a, cmp_b, min_psnr);
  if (*info_cmd) return run_info(info_dir);
  return kExitUsage;
}
