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

#include "vmesh/assets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vmesh {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint8_t quantize(double v, double min, double max) {
  if (!(max > min)) throw std::invalid_argument("quantize needs max > min");
  double t = (v - min) / (max - min);
  if (std::isnan(t)) t = 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::uint8_t(std::lround(255.0 * t));
}

double dequantize(std::uint8_t q, double min, double max) {
  return min + (max - min) * (double(q) / 255.0);
}

QuantizedImage quantize_image(std::span<const float> values, int width, int height,
                              std::vector<ChannelRange> ranges) {
  const int channels = int(ranges.size());
  if (values.size() != std::size_t(width) * height * channels) {
    throw std::invalid_argument("quantize_image: value count does not match the dimensions");
  }
  QuantizedImage out;
  out.image = Image8(width, height, channels);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const ChannelRange& r = ranges[i % channels];
    out.image.data[i] = quantize(values[i], r.min, r.max);
  }
  out.ranges = std::move(ranges);
  return out;
}

std::vector<ChannelRange> data_ranges(std::span<const float> values, int channels) {
  std::vector<ChannelRange> ranges(channels, {0.0, 0.0});
  std::vector<bool> seen(channels, false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int c = int(i % channels);
    const double v = values[i];
    if (!seen[c]) {
      ranges[c] = {v, v};
      seen[c] = true;
    }
    ranges[c].min = std::min(ranges[c].min, v);
    ranges[c].max = std::max(ranges[c].max, v);
  }
  for (ChannelRange& r : ranges) {
    if (!(r.max > r.min)) r.max = r.min + 1.0;
  }
  return ranges;
}

namespace {

std::vector<ChannelRange> unit_ranges(int channels) {
  return std::vector<ChannelRange>(channels, ChannelRange{0.0, 1.0});
}

std::size_t occupancy_bytes(int grid_n) {
  return (std::size_t(grid_n) * grid_n * grid_n + 7) / 8;
}

}  // namespace

VMeshAssets make_assets(const Aabb& bounds, const TriMesh& mesh, const TextureMaps& textures,
                        const Appearance& appearance, const SparseVolume& volume,
                        const PshTable& psh, double sigma_max) {
  if (!(sigma_max > 0.0)) throw std::invalid_argument("sigma_max must be positive");
  VMeshAssets a;
  a.bounds = bounds;
  a.mesh = mesh;
  const int ts = textures.size;
  a.tex_normal = quantize_image(textures.normal, ts, ts, unit_ranges(3));
  a.tex_diffuse = quantize_image(textures.diffuse, ts, ts, unit_ranges(3));
  a.tex_tint = quantize_image(textures.tint, ts, ts, unit_ranges(3));
  a.tex_weights = quantize_image(textures.weights, ts, ts, unit_ranges(4));
  a.tex_metal = quantize_image(textures.metallic, ts, ts, unit_ranges(1));

  const int e = appearance.maps.edge();
  for (int b = 0; b < kBasisCount; ++b) {
    std::vector<float> strip(std::size_t(e) * e * kCubeFaces * 3);
    for (int f = 0; f < kCubeFaces; ++f) {
      for (int y = 0; y < e; ++y) {
        for (int x = 0; x < e; ++x) {
          const Rgb c = appearance.maps.texel(b, f, x, y);
          float* p = &strip[((std::size_t(f) * e + y) * e + x) * 3];
          p[0] = float(c.r);
          p[1] = float(c.g);
          p[2] = float(c.b);
        }
      }
    }
    a.env[b] = quantize_image(strip, e, e * kCubeFaces, data_ranges(strip, 3));
  }
  const int ls = appearance.lut.size();
  std::vector<float> lut(std::size_t(ls) * ls);
  for (int v = 0; v < ls; ++v) {
    for (int u = 0; u < ls; ++u) lut[std::size_t(v) * ls + u] = appearance.lut.at(u, v);
  }
  a.lut = quantize_image(lut, ls, ls, unit_ranges(1));

  VolumeAssets& vol = a.volume;
  vol.grid_n = volume.grid_n;
  vol.block_b = volume.block_b;
  vol.sigma_max = sigma_max;
  vol.occupied_voxels = volume.occupied.size();
  vol.occupancy = build_occupancy(volume);
  if (volume.blocks.empty()) return a;

  vol.psh = psh;
  const int bsz = volume.block_b;
  const int d = psh.m_bar * bsz;
  const std::size_t voxels = std::size_t(d) * d * d;
  std::vector<float> diffuse(voxels * 3, 0.0f), tint(voxels * 3, 0.0f), normal(voxels * 3, 0.0f);
  std::vector<float> weights(voxels * 4, 0.0f), dm(voxels * 3, 0.0f);
  for (const Brick& brick : volume.blocks) {
    vol.block_coords.push_back(brick.coord);
    const IVec3 slot = psh_lookup(psh, brick.coord);
    for (int z = 0; z < bsz; ++z) {
      for (int y = 0; y < bsz; ++y) {
        for (int x = 0; x < bsz; ++x) {
          const VoxelRecord& r = brick.voxels[x + bsz * (y + bsz * z)];
          const std::size_t i = std::size_t(slot.x * bsz + x) +
                                d * (std::size_t(slot.y * bsz + y) + d * std::size_t(slot.z * bsz + z));
          for (int c = 0; c < 3; ++c) {
            diffuse[i * 3 + c] = float(r.diffuse[c]);
            tint[i * 3 + c] = float(r.tint[c]);
            normal[i * 3 + c] = float(0.5 * (r.normal[c] + 1.0));
          }
          for (int c = 0; c < kBasisCount; ++c) weights[i * 4 + c] = float(r.weights[c]);
          dm[i * 3 + 0] = float(r.density);
          dm[i * 3 + 1] = float(r.metallic);
        }
      }
    }
  }
  vol.diffuse = quantize_image(diffuse, d, d * d, unit_ranges(3));
  vol.tint = quantize_image(tint, d, d * d, unit_ranges(3));
  vol.normal = quantize_image(normal, d, d * d, unit_ranges(3));
  vol.weights = quantize_image(weights, d, d * d, unit_ranges(4));
  vol.density_metal =
      quantize_image(dm, d, d * d, {ChannelRange{0.0, sigma_max}, ChannelRange{}, ChannelRange{}});
  return a;
}

Appearance decode_appearance(const VMeshAssets& assets) {
  Appearance app;
  const int e = assets.env_edge();
  app.maps = CubeMapSet(e);
  for (int b = 0; b < kBasisCount; ++b) {
    const QuantizedImage& q = assets.env[b];
    for (int f = 0; f < kCubeFaces; ++f) {
      for (int y = 0; y < e; ++y) {
        for (int x = 0; x < e; ++x) {
          const int row = f * e + y;
          app.maps.set_texel(b, f, x, y, {q.value(x, row, 0), q.value(x, row, 1), q.value(x, row, 2)});
        }
      }
    }
  }
  const int ls = assets.lut.image.width;
  app.lut = AttenuationLut(ls);
  for (int v = 0; v < ls; ++v) {
    for (int u = 0; u < ls; ++u) app.lut.set(u, v, float(assets.lut.value(u, v, 0)));
  }
  return app;
}

namespace {

void check_image(std::vector<std::string>& out, const std::string& name, const QuantizedImage& q,
                 int width, int height, int channels) {
  const Image8& im = q.image;
  if (im.width != width || im.height != height || im.channels != channels ||
      im.data.size() != std::size_t(width) * height * channels) {
    std::ostringstream s;
    s << "manifest-dimensions: " << name << " is " << im.width << "x" << im.height << "x"
      << im.channels << ", expected " << width << "x" << height << "x" << channels;
    out.push_back(s.str());
  }
  if (q.ranges.size() != std::size_t(channels)) {
    out.push_back("quantization-ranges: " + name + " has " + std::to_string(q.ranges.size()) +
                  " channel ranges, expected " + std::to_string(channels));
  }
  for (const ChannelRange& r : q.ranges) {
    if (!(std::isfinite(r.min) && std::isfinite(r.max) && r.max > r.min)) {
      out.push_back("quantization-ranges: " + name + " has an empty or non-finite range");
      break;
    }
  }
}

}  // namespace

std::vector<std::string> check_assets(const VMeshAssets& a) {
  std::vector<std::string> out;
  try {
    validate_mesh(a.mesh);
  } catch (const std::exception& e) {
    out.push_back(std::string("mesh: ") + e.what());
  }
  if (!a.mesh.triangles.empty() && !a.mesh.has_uvs()) out.push_back("mesh: triangles without UVs");
  const bool uvs_in_range = std::all_of(a.mesh.uvs.begin(), a.mesh.uvs.end(), [](const TriangleUv& t) {
    return std::all_of(t.begin(), t.end(), [](const Vec2& uv) {
      return uv.u >= 0.0 && uv.u <= 1.0 && uv.v >= 0.0 && uv.v <= 1.0;
    });
  });
  if (!uvs_in_range) out.push_back("mesh: UV outside [0,1]");

  const int ts = a.tex_normal.image.width;
  if (ts < 1) out.push_back("manifest-dimensions: empty texture atlas");
  check_image(out, "tex_normal", a.tex_normal, ts, ts, 3);
  check_image(out, "tex_diffuse", a.tex_diffuse, ts, ts, 3);
  check_image(out, "tex_tint", a.tex_tint, ts, ts, 3);
  check_image(out, "tex_weights", a.tex_weights, ts, ts, 4);
  check_image(out, "tex_metal", a.tex_metal, ts, ts, 1);
  const int e = a.env_edge();
  if (e < 1) out.push_back("manifest-dimensions: empty environment map");
  for (int b = 0; b < kBasisCount; ++b) {
    check_image(out, "env_" + std::to_string(b), a.env[b], e, e * kCubeFaces, 3);
  }
  const int ls = a.lut.image.width;
  if (ls < 2) out.push_back("manifest-dimensions: attenuation LUT smaller than 2");
  check_image(out, "lut", a.lut, ls, ls, 1);

  const VolumeAssets& v = a.volume;
  if (v.grid_n < 1 || v.block_b < 1 || v.grid_n % v.block_b != 0) {
    out.push_back("manifest-dimensions: grid_n must be a positive multiple of block_b");
    return out;
  }
  if (!(v.sigma_max > 0.0)) out.push_back("quantization-ranges: sigma_max must be positive");
  if (v.occupancy.size() != occupancy_bytes(v.grid_n)) {
    out.push_back("manifest-dimensions: occupancy has " + std::to_string(v.occupancy.size()) +
                  " bytes, expected " + std::to_string(occupancy_bytes(v.grid_n)));
    return out;
  }

  std::size_t popcount = 0;
  std::set<IVec3> occupied_blocks;
  const int n = v.grid_n;
  for (std::size_t byte = 0; byte < v.occupancy.size(); ++byte) {
    const std::uint8_t bits = v.occupancy[byte];
    if (bits == 0) continue;
    popcount += std::popcount(bits);
    for (int k = 0; k < 8; ++k) {
      if (!((bits >> k) & 1u)) continue;
      const std::size_t idx = byte * 8 + k;
      if (idx >= std::size_t(n) * n * n) continue;
      const IVec3 vox{int(idx % n), int((idx / n) % n), int(idx / (std::size_t(n) * n))};
      occupied_blocks.insert(block_of(vox, v.block_b));
    }
  }
  if (popcount != v.occupied_voxels) {
    out.push_back("occupancy-popcount: " + std::to_string(popcount) + " bits set, manifest lists " +
                  std::to_string(v.occupied_voxels) + " occupied voxels");
  }
  const std::set<IVec3> listed(v.block_coords.begin(), v.block_coords.end());
  if (listed.size() != v.block_coords.size()) out.push_back("brick-coverage: duplicate block");
  if (listed != occupied_blocks) {
    out.push_back("brick-coverage: blocks holding occupied voxels (" +
                  std::to_string(occupied_blocks.size()) + ") differ from the stored bricks (" +
                  std::to_string(listed.size()) + ")");
  }
  if (v.empty()) return out;

  const PshTable& h = v.psh;
  const std::size_t nblocks = v.block_coords.size();
  const std::size_t m3 = std::size_t(h.m_bar) * h.m_bar * h.m_bar;
  if (h.m_bar < 1 || h.r_bar < 1) {
    out.push_back("psh-size: table dimensions must be positive");
    return out;
  }
  if (m3 < nblocks || m3 > 8 * nblocks) {
    out.push_back("psh-size: m_bar^3 = " + std::to_string(m3) + " outside [N, 8N] for N = " +
                  std::to_string(nblocks));
  }
  if (h.offsets.size() != std::size_t(h.r_bar) * h.r_bar * h.r_bar || h.slots.size() != m3) {
    out.push_back("manifest-dimensions: hash tables do not match m_bar / r_bar");
    return out;
  }
  const int d = v.atlas_dim();
  check_image(out, "vol_diffuse", v.diffuse, d, d * d, 3);
  check_image(out, "vol_tint", v.tint, d, d * d, 3);
  check_image(out, "vol_normal", v.normal, d, d * d, 3);
  check_image(out, "vol_weights", v.weights, d, d * d, 4);
  check_image(out, "vol_density_metal", v.density_metal, d, d * d, 3);

  std::set<int> slots;
  bool consistent = true;
  const int nb = v.grid_n / v.block_b;
  for (std::size_t i = 0; i < nblocks; ++i) {
    const IVec3& c = v.block_coords[i];
    if (c.x < 0 || c.y < 0 || c.z < 0 || c.x >= nb || c.y >= nb || c.z >= nb) {
      out.push_back("brick-coverage: block coordinate outside the grid");
      return out;
    }
    const int s = psh_slot_index(h, psh_lookup(h, c));
    slots.insert(s);
    if (h.slots[s] != int(i)) consistent = false;
  }
  if (slots.size() != nblocks) {
    out.push_back("psh-injectivity: " + std::to_string(nblocks) + " blocks map to " +
                  std::to_string(slots.size()) + " distinct slots");
  }
  const auto filled = std::count_if(h.slots.begin(), h.slots.end(), [](int s) { return s >= 0; });
  if (!consistent || std::size_t(filled) != nblocks) {
    out.push_back("psh-slots: hash lookups disagree with the recorded slot assignment");
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Container I/O

namespace {

json range_json(const std::vector<ChannelRange>& ranges) {
  json arr = json::array();
  for (const ChannelRange& r : ranges) arr.push_back({r.min, r.max});
  return arr;
}

json map_json(const std::string& file, const QuantizedImage& q) {
  return {{"file", file},
          {"width", q.image.width},
          {"height", q.image.height},
          {"channels", q.image.channels},
          {"ranges", range_json(q.ranges)}};
}

json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ContainerError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!f) throw ContainerError("write failed: " + path.string());
}

Image8 offsets_image(const PshTable& h) {
  const int r = h.r_bar;
  Image8 im(r, r * r, 3);
  for (std::size_t i = 0; i < h.offsets.size(); ++i) {
    for (int c = 0; c < 3; ++c) im.data[i * 3 + c] = h.offsets[i][c];
  }
  return im;
}

}  // namespace

void save_container(const VMeshAssets& a, const fs::path& dir) {
  if (const auto failures = check_assets(a); !failures.empty()) {
    throw ContainerError("refusing to save invalid assets: " + failures.front());
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ContainerError("cannot create " + dir.string() + ": " + ec.message());

  json m;
  m["format"] = "vmesh";
  m["version"] = kAssetsVersion;
  m["bounds"] = {{"min", vec_json(a.bounds.min)}, {"max", vec_json(a.bounds.max)}};
  m["conventions"] = {
      {"uv", "u along image columns, v down image rows, texel centers at (i + 0.5) / size"},
      {"normal_encoding", "(n + 1) / 2"},
      {"quantization", "q = round(255 clamp((v - min) / (max - min), 0, 1))"},
      {"cube_faces", {"+X", "-X", "+Y", "-Y", "+Z", "-Z"}},
      {"cube_layout", "faces stacked vertically, edge x 6 edge"},
      {"lut_axes", "x: cos(theta) in [0,1], y: metallic in [0,1]"},
      {"volume_layout", "(m_bar B)^3 atlas, z-slices stacked vertically"},
      {"occupancy_bits", "bit x + n (y + n z), 8 per byte, least significant first"},
      {"offsets_layout", "r_bar x r_bar^2 RGB, z-slices stacked vertically, used mod r_bar"},
      {"tone_map", "clamp to [0,1], sRGB transfer"}};

  write_obj(dir / "mesh.obj", a.mesh);
  m["mesh"] = {{"file", "mesh.obj"},
               {"vertices", a.mesh.vertices.size()},
               {"triangles", a.mesh.triangles.size()}};

  const std::pair<const char*, const QuantizedImage*> tex[] = {{"tex_normal", &a.tex_normal},
                                                               {"tex_diffuse", &a.tex_diffuse},
                                                               {"tex_tint", &a.tex_tint},
                                                               {"tex_weights", &a.tex_weights},
                                                               {"tex_metal", &a.tex_metal}};
  for (const auto& [name, q] : tex) {
    const std::string file = std::string(name) + ".png";
    write_png(dir / file, q->image);
    m["textures"][name] = map_json(file, *q);
  }
  m["env"]["edge"] = a.env_edge();
  for (int b = 0; b < kBasisCount; ++b) {
    const std::string file = "env_" + std::to_string(b) + ".png";
    write_png(dir / file, a.env[b].image);
    m["env"]["maps"].push_back(map_json(file, a.env[b]));
  }
  write_png(dir / "lut.png", a.lut.image);
  m["lut"] = map_json("lut.png", a.lut);

  const VolumeAssets& v = a.volume;
  json vol;
  vol["grid_n"] = v.grid_n;
  vol["block_b"] = v.block_b;
  vol["sigma_max"] = v.sigma_max;
  vol["occupied_voxels"] = v.occupied_voxels;
  write_bytes(dir / "occupancy.bin", v.occupancy);
  vol["occupancy"] = {{"file", "occupancy.bin"}, {"bytes", v.occupancy.size()}};
  vol["blocks"] = json::array();
  vol["slots"] = json::array();
  for (const IVec3& c : v.block_coords) {
    vol["blocks"].push_back({c.x, c.y, c.z});
    vol["slots"].push_back(psh_slot_index(v.psh, psh_lookup(v.psh, c)));
  }
  vol["m_bar"] = v.psh.m_bar;
  vol["r_bar"] = v.psh.r_bar;
  if (!v.empty()) {
    write_png(dir / "offsets.png", offsets_image(v.psh));
    vol["offsets"] = {{"file", "offsets.png"}, {"width", v.psh.r_bar},
                      {"height", v.psh.r_bar * v.psh.r_bar}};
    const std::pair<const char*, const QuantizedImage*> maps[] = {
        {"vol_diffuse", &v.diffuse},
        {"vol_tint", &v.tint},
        {"vol_normal", &v.normal},
        {"vol_weights", &v.weights},
        {"vol_density_metal", &v.density_metal}};
    for (const auto& [name, q] : maps) {
      const std::string file = std::string(name) + ".png";
      write_png(dir / file, q->image);
      vol["maps"][name] = map_json(file, *q);
    }
  }
  m["volume"] = vol;

  const std::string text = m.dump(2) + "\n";
  write_bytes(dir / "manifest.json",
              {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

namespace {

struct Loader {
  fs::path dir;
  std::vector<std::string>& failures;

  bool exists(const std::string& file) {
    if (fs::is_regular_file(dir / file)) return true;
    failures.push_back("missing file: " + (dir / file).string());
    return false;
  }

  QuantizedImage map(const json& entry, const std::string& name) {
    QuantizedImage q;
    const std::string file = entry.at("file").get<std::string>();
    for (const auto& r : entry.at("ranges")) {
      q.ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    }
    if (!exists(file)) return q;
    try {
      q.image = read_png(dir / file);
    } catch (const std::exception& e) {
      failures.push_back("file-integrity: " + std::string(e.what()));
      return q;
    }
    const int w = entry.at("width").get<int>();
    const int h = entry.at("height").get<int>();
    const int c = entry.at("channels").get<int>();
    if (q.image.width != w || q.image.height != h || q.image.channels != c) {
      std::ostringstream s;
      s << "manifest-dimensions: " << name << " (" << file << ") is " << q.image.width << "x"
        << q.image.height << "x" << q.image.channels << ", manifest says " << w << "x" << h << "x"
        << c;
      failures.push_back(s.str());
    }
    return q;
  }
};

Vec3 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

}  // namespace

ContainerInspection inspect_container(const fs::path& dir) {
  ContainerInspection result;
  auto& fail = result.failures;
  if (!fs::is_directory(dir)) {
    fail.push_back("missing file: " + dir.string() + " is not a directory");
    return result;
  }
  const fs::path manifest_path = dir / "manifest.json";
  json m;
  {
    std::ifstream f(manifest_path, std::ios::binary);
    if (!f) {
      fail.push_back("missing file: " + manifest_path.string());
      return result;
    }
    try {
      m = json::parse(f);
    } catch (const std::exception& e) {
      fail.push_back("manifest: " + manifest_path.string() + ": " + e.what());
      return result;
    }
  }

  VMeshAssets& a = result.assets;
  const std::size_t before = fail.size();
  try {
    if (m.value("format", std::string()) != "vmesh") {
      fail.push_back("manifest: not a vmesh container");
      return result;
    }
    const int version = m.at("version").get<int>();
    if (version != kAssetsVersion) {
      fail.push_back("version: unsupported container version " + std::to_string(version) +
                     " (this build reads version " + std::to_string(kAssetsVersion) + ")");
      return result;
    }
    Loader load{dir, fail};
    a.bounds = {vec_from(m.at("bounds").at("min")), vec_from(m.at("bounds").at("max"))};

    const std::string obj = m.at("mesh").at("file").get<std::string>();
    if (load.exists(obj)) {
      try {
        a.mesh = read_obj(dir / obj);
      } catch (const std::exception& e) {
        fail.push_back(std::string("file-integrity: ") + e.what());
      }
      if (a.mesh.vertices.size() != m.at("mesh").at("vertices").get<std::size_t>() ||
          a.mesh.triangles.size() != m.at("mesh").at("triangles").get<std::size_t>()) {
        fail.push_back("manifest-dimensions: mesh.obj element counts differ from the manifest");
      }
    }

    const json& tex = m.at("textures");
    a.tex_normal = load.map(tex.at("tex_normal"), "tex_normal");
    a.tex_diffuse = load.map(tex.at("tex_diffuse"), "tex_diffuse");
    a.tex_tint = load.map(tex.at("tex_tint"), "tex_tint");
    a.tex_weights = load.map(tex.at("tex_weights"), "tex_weights");
    a.tex_metal = load.map(tex.at("tex_metal"), "tex_metal");
    const json& env = m.at("env").at("maps");
    if (env.size() != std::size_t(kBasisCount)) {
      fail.push_back("manifest-dimensions: expected " + std::to_string(kBasisCount) + " env maps");
      return result;
    }
    for (int b = 0; b < kBasisCount; ++b) a.env[b] = load.map(env.at(b), "env_" + std::to_string(b));
    a.lut = load.map(m.at("lut"), "lut");

    const json& vol = m.at("volume");
    VolumeAssets& v = a.volume;
    v.grid_n = vol.at("grid_n").get<int>();
    v.block_b = vol.at("block_b").get<int>();
    v.sigma_max = vol.at("sigma_max").get<double>();
    v.occupied_voxels = vol.at("occupied_voxels").get<std::size_t>();
    const std::string occ = vol.at("occupancy").at("file").get<std::string>();
    if (load.exists(occ)) {
      std::ifstream f(dir / occ, std::ios::binary);
      v.occupancy.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
      if (v.occupancy.size() != vol.at("occupancy").at("bytes").get<std::size_t>()) {
        fail.push_back("manifest-dimensions: occupancy.bin has " +
                       std::to_string(v.occupancy.size()) + " bytes, manifest says " +
                       std::to_string(vol.at("occupancy").at("bytes").get<std::size_t>()));
      }
    }
    for (const auto& c : vol.at("blocks")) {
      v.block_coords.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>()});
    }
    const auto slots = vol.at("slots").get<std::vector<int>>();
    if (slots.size() != v.block_coords.size()) {
      fail.push_back("manifest-dimensions: slot list length differs from the block list");
    }
    if (!v.block_coords.empty()) {
      PshTable& h = v.psh;
      h.m_bar = vol.at("m_bar").get<int>();
      h.r_bar = vol.at("r_bar").get<int>();
      if (h.m_bar < 1 || h.r_bar < 1 || h.m_bar > 1024 || h.r_bar > 256) {
        fail.push_back("psh-size: implausible hash dimensions");
        return result;
      }
      const std::string off = vol.at("offsets").at("file").get<std::string>();
      if (load.exists(off)) {
        Image8 im;
        try {
          im = read_png(dir / off);
        } catch (const std::exception& e) {
          fail.push_back(std::string("file-integrity: ") + e.what());
        }
        if (im.width != h.r_bar || im.height != h.r_bar * h.r_bar || im.channels != 3) {
          fail.push_back("manifest-dimensions: " + off + " is " + std::to_string(im.width) + "x" +
                         std::to_string(im.height) + "x" + std::to_string(im.channels) +
                         ", expected " + std::to_string(h.r_bar) + "x" +
                         std::to_string(h.r_bar * h.r_bar) + "x3");
        } else {
          h.offsets.resize(std::size_t(h.r_bar) * h.r_bar * h.r_bar);
          for (std::size_t i = 0; i < h.offsets.size(); ++i) {
            h.offsets[i] = {im.data[i * 3], im.data[i * 3 + 1], im.data[i * 3 + 2]};
          }
        }
      }
      const std::size_t m3 = std::size_t(h.m_bar) * h.m_bar * h.m_bar;
      h.slots.assign(m3, -1);
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i] < 0 || std::size_t(slots[i]) >= m3) {
          fail.push_back("psh-slots: recorded slot out of range");
          break;
        }
        h.slots[slots[i]] = int(i);
      }
      const json& maps = vol.at("maps");
      v.diffuse = load.map(maps.at("vol_diffuse"), "vol_diffuse");
      v.tint = load.map(maps.at("vol_tint"), "vol_tint");
      v.normal = load.map(maps.at("vol_normal"), "vol_normal");
      v.weights = load.map(maps.at("vol_weights"), "vol_weights");
      v.density_metal = load.map(maps.at("vol_density_metal"), "vol_density_metal");
    }
  } catch (const json::exception& e) {
    fail.push_back(std::string("manifest: ") + e.what());
    return result;
  }
  if (fail.size() != before) return result;
  for (std::string& f : check_assets(a)) fail.push_back(std::move(f));
  result.loaded = true;
  return result;
}

VMeshAssets load_container(const fs::path& dir) {
  ContainerInspection r = inspect_container(dir);
  if (!r.failures.empty()) {
    std::string msg = "invalid container " + dir.string() + ":";
    for (const std::string& f : r.failures) msg += "\n  " + f;
    throw ContainerError(msg);
  }
  return std::move(r.assets);
}

}  // namespace vmesh
