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
#include <stdexcept>
#include <string>
#include <vector>

#include "vmesh/math.hpp"

namespace vmesh {

/// Perfect spatial hash over block coordinates:
///   h(p) = ((p mod m) + (offsets[p mod r] mod r)) mod m, componentwise.
struct PshTable {
  int m_bar = 0;
  int r_bar = 0;
  /// r_bar^3 entries, index x + r (y + r z); each component < r_bar.
  std::vector<std::array<std::uint8_t, 3>> offsets;
  /// m_bar^3 slots, index x + m (y + m z); -1 when empty, else the position of the block in the
  /// coordinate list passed to psh_build.
  std::vector<int> slots;

  std::size_t slot_count() const { return slots.size(); }
  friend bool operator==(const PshTable&, const PshTable&) = default;
};

inline constexpr std::uint64_t kPshSeed = 0x9e3779b97f4a7c15ULL;

class PshBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial offset-table edge: smallest r >= 2 with 6 r^3 >= n, raised until coprime with m_bar.
int psh_initial_r_bar(std::size_t n, int m_bar);
/// Smallest m with m^3 >= n.
int psh_min_m_bar(std::size_t n);

/// Builds an injective hash for distinct coordinates in [0, domain_blocks)^3.
/// Offsets are assigned largest offset-table bucket first, trying candidate offsets in a
/// seeded pseudo-random order. On failure r_bar grows (kept coprime to m_bar, below m_bar);
/// once that range is exhausted m_bar grows while m_bar^3 <= 8 n.
PshTable psh_build(std::span<const IVec3> coords, int domain_blocks, std::uint64_t seed = kPshSeed);

IVec3 psh_lookup(const PshTable& table, const IVec3& p);
inline int psh_slot_index(const PshTable& table, const IVec3& s) {
  return s.x + table.m_bar * (s.y + table.m_bar * s.z);
}

}  // namespace vmesh
