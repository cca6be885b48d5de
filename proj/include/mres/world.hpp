// Copyright 2026 The mres-lattice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "mres/core.hpp"

namespace mres {

class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Axis-aligned obstacle box, closed on all faces.
struct Box {
  Vec3 min;
  Vec3 max;

  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

/// Voxelized environment. The world spans [origin, origin + dims * cell_size]
/// and flight is restricted to [z_min, z_max].
struct VoxelWorld {
  std::array<int, 3> dims{};
  double cell_size = 0.25;
  Vec3 origin;
  std::vector<Box> boxes;
  double z_min = 0.0;
  double z_max = 10.0;

  Vec3 extent() const {
    return Vec3{dims[0] * cell_size, dims[1] * cell_size, dims[2] * cell_size};
  }
  Vec3 upper() const { return origin + extent(); }
  Vec3 center() const { return origin + 0.5 * extent(); }
  double diagonal() const { return extent().norm(); }

  /// Throws InputError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const VoxelWorld&, const VoxelWorld&) = default;
};

/// Empty world of the given metric size with flight altitude [0, size_z].
VoxelWorld make_empty_world(double size_x, double size_y, double size_z, double cell_size);

struct WorldGenParams {
  std::uint64_t seed = 1;
  int n_buildings = 20;
  double size_x = 64.0;
  double size_y = 64.0;
  double size_z = 10.0;
  double cell_size = 0.25;
  double footprint_min = 3.0;
  double footprint_max = 10.0;
  double height_min = 3.0;
  double height_max = 10.0;
  /// Half-width of the square around the map center kept free of buildings.
  double protected_halfwidth = 4.0;
};

/// Deterministic procedural city: buildings are boxes standing on the ground,
/// corners snapped to the voxel grid, none touching the protected center.
VoxelWorld generate_world(const WorldGenParams& params);

void write_world(const VoxelWorld& world, std::ostream& out);
std::string format_world(const VoxelWorld& world);
VoxelWorld read_world(std::istream& in);
void save_world(const VoxelWorld& world, const std::string& path);
VoxelWorld load_world(const std::string& path);

}  // namespace mres
