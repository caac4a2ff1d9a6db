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

#include "vmesh/psh.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>

namespace vmesh {

int psh_min_m_bar(std::size_t n) {
  int m = 1;
  while (std::size_t(m) * m * m < n) ++m;
  return m;
}

int psh_initial_r_bar(std::size_t n, int m_bar) {
  int r = 2;
  while (6 * std::size_t(r) * r * r < n) ++r;
  while (std::gcd(r, m_bar) != 1) ++r;
  return r;
}

IVec3 psh_lookup(const PshTable& table, const IVec3& p) {
  const int m = table.m_bar;
  const int r = table.r_bar;
  const auto& o = table.offsets[std::size_t(p.x % r) + r * (std::size_t(p.y % r) + r * (p.z % r))];
  return {(p.x % m + o[0] % r) % m, (p.y % m + o[1] % r) % m, (p.z % m + o[2] % r) % m};
}

namespace {

// Greedy assignment with different candidate orders before growing the table.
constexpr int kAttemptsPerSize = 16;

bool try_build(std::span<const IVec3> coords, int m, int r, std::uint64_t seed, PshTable& out) {
  const std::size_t r3 = std::size_t(r) * r * r;
  const std::size_t m3 = std::size_t(m) * m * m;
  std::vector<std::vector<int>> buckets(r3);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const IVec3& p = coords[i];
    buckets[std::size_t(p.x % r) + r * (std::size_t(p.y % r) + r * (p.z % r))].push_back(int(i));
  }
  std::vector<std::size_t> order(r3);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return buckets[a].size() > buckets[b].size();
  });

  // Candidate offsets in a fixed pseudo-random order; each bucket starts at its own position.
  std::mt19937_64 rng(seed ^ (std::uint64_t(m) << 32) ^ std::uint64_t(r));
  std::vector<std::uint32_t> candidates(r3);
  std::iota(candidates.begin(), candidates.end(), 0u);
  for (std::size_t i = r3; i > 1; --i) std::swap(candidates[i - 1], candidates[rng() % i]);

  out.m_bar = m;
  out.r_bar = r;
  out.offsets.assign(r3, {0, 0, 0});
  out.slots.assign(m3, -1);
  std::vector<std::size_t> trial;
  for (std::size_t entry : order) {
    const auto& bucket = buckets[entry];
    if (bucket.empty()) break;
    const std::size_t start = rng() % r3;
    bool placed = false;
    for (std::size_t c = 0; c < r3 && !placed; ++c) {
      const std::uint32_t cand = candidates[(start + c) % r3];
      const int ox = int(cand % r);
      const int oy = int((cand / r) % r);
      const int oz = int(cand / (std::size_t(r) * r));
      trial.clear();
      bool ok = true;
      for (int idx : bucket) {
        const IVec3& p = coords[idx];
        const std::size_t s = std::size_t((p.x % m + ox) % m) +
                              m * (std::size_t((p.y % m + oy) % m) + m * ((p.z % m + oz) % m));
        if (out.slots[s] >= 0 || std::find(trial.begin(), trial.end(), s) != trial.end()) {
          ok = false;
          break;
        }
        trial.push_back(s);
      }
      if (!ok) continue;
      for (std::size_t k = 0; k < bucket.size(); ++k) out.slots[trial[k]] = bucket[k];
      out.offsets[entry] = {std::uint8_t(ox), std::uint8_t(oy), std::uint8_t(oz)};
      placed = true;
    }
    if (!placed) return false;
  }
  return true;
}

// False when two blocks share both p mod m and p mod r, which no offset table can separate.
bool separable(std::span<const IVec3> coords, int m, int r) {
  std::set<std::array<int, 6>> keys;
  for (const IVec3& p : coords) {
    if (!keys.insert({p.x % m, p.y % m, p.z % m, p.x % r, p.y % r, p.z % r}).second) return false;
  }
  return true;
}

}  // namespace

PshTable psh_build(std::span<const IVec3> coords, int domain_blocks, std::uint64_t seed) {
  const std::size_t n = coords.size();
  if (n == 0) throw std::invalid_argument("psh_build needs at least one block");
  if (domain_blocks < 1) throw std::invalid_argument("psh_build: domain must be non-empty");
  std::set<IVec3> seen;
  for (const IVec3& p : coords) {
    if (p.x < 0 || p.y < 0 || p.z < 0 || p.x >= domain_blocks || p.y >= domain_blocks ||
        p.z >= domain_blocks) {
      throw std::invalid_argument("psh_build: block coordinate outside the domain");
    }
    if (!seen.insert(p).second) throw std::invalid_argument("psh_build: duplicate coordinate");
  }

  const int m_min = psh_min_m_bar(n);
  std::string tried;
  PshTable table;
  int m_max = m_min;
  while (std::size_t(m_max + 1) * (m_max + 1) * (m_max + 1) <= 8 * n) ++m_max;
  for (int m = m_min; m <= m_max; ++m) {
    const int r_first = psh_initial_r_bar(n, m);
    // Blocks congruent modulo m * r on every axis always collide, so the last table size also
    // lets r grow past m.
    for (int r = r_first; r == r_first || r < m || (m == m_max && r <= 255); ++r) {
      if (std::gcd(r, m) != 1) continue;
      if (r > 255) break;
      if (!separable(coords, m, r)) {
        tried += " (m=" + std::to_string(m) + ", r=" + std::to_string(r) + " congruent)";
        continue;
      }
      for (int attempt = 0; attempt < kAttemptsPerSize; ++attempt) {
        const std::uint64_t s = seed + std::uint64_t(attempt) * 0xd1b54a32d192ed03ull;
        if (try_build(coords, m, r, s, table)) return table;
      }
      tried += " (m=" + std::to_string(m) + ", r=" + std::to_string(r) + ")";
    }
  }
  throw PshBuildError("perfect spatial hash construction failed for " + std::to_string(n) +
                      " blocks; tried" + tried);
}

}  // namespace vmesh
