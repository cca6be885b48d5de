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
#include <optional>
#include <vector>

#include "mres/core.hpp"
#include "mres/world.hpp"

namespace mres {

/// Euclidean distance (m) from every voxel center to the nearest obstacle
/// voxel center. Voxels inside a box or outside the altitude band are
/// obstacles, and so is a virtual one-voxel shell around the world.
class DistanceField {
 public:
  DistanceField() = default;

  const std::array<int, 3>& dims() const { return dims_; }
  double cell_size() const { return cell_; }
  const Vec3& origin() const { return origin_; }
  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }

  /// Voxel containing p, or nullopt outside the world.
  std::optional<std::array<int, 3>> voxel_of(const Vec3& p) const {
    std::array<int, 3> idx{};
    for (int a = 0; a < 3; ++a) {
      const double r = (p[a] - origin_[a]) / cell_;
      if (!(r >= 0.0) || r >= dims_[static_cast<std::size_t>(a)]) return std::nullopt;
      idx[static_cast<std::size_t>(a)] = static_cast<int>(r);
    }
    return idx;
  }
  double at(int i, int j, int k) const { return dist_[index(i, j, k)]; }
  bool occupied(int i, int j, int k) const { return dist_[index(i, j, k)] == 0.0; }
  Vec3 voxel_center(int i, int j, int k) const;

  /// Nearest-voxel distance lookup; 0 outside the world.
  double distance(const Vec3& p) const {
    const auto v = voxel_of(p);
    return v ? at((*v)[0], (*v)[1], (*v)[2]) : 0.0;
  }

 private:
  friend DistanceField build_distance_field(const VoxelWorld& world);

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(dims_[1]) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(dims_[0]) +
           static_cast<std::size_t>(i);
  }

  std::array<int, 3> dims_{};
  double cell_ = 1.0;
  Vec3 origin_;
  double z_min_ = 0.0;
  double z_max_ = 0.0;
  std::vector<double> dist_;
};

/// Exact separable squared-distance transform (lower envelope of parabolas).
DistanceField build_distance_field(const VoxelWorld& world);

/// Required field value for a valid position: clearance plus half a voxel diagonal.
double clearance_threshold(const DistanceField& field, const PlannerConfig& cfg);

bool state_valid(const Vec3& p, const DistanceField& field, const PlannerConfig& cfg);

/// Samples the primitive densely enough that consecutive samples are at most
/// half a voxel apart and checks every sample, both endpoints included.
/// Also rejects accelerations beyond u_max and velocities beyond v_max.
/// `refine` doubles the sample count that many times.
bool primitive_collision_free(const MotionPrimitive& prim, const DistanceField& field, const PlannerConfig& cfg,
                              int refine = 0);

}  // namespace mres
