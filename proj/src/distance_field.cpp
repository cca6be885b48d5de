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

#include "mres/distance_field.hpp"

#include <limits>

namespace mres {

namespace {

constexpr double kFar = 1e20;

// Felzenszwalb-Huttenlocher 1D squared distance transform of f (in place).
// Distances are in voxel units; inputs are 0 (obstacle) or kFar.
void edt_1d(std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = 0.0;
    while (true) {
      const int p = v[static_cast<std::size_t>(k)];
      s = ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
           (f[static_cast<std::size_t>(p)] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s <= z[static_cast<std::size_t>(k)] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[static_cast<std::size_t>(k)]) {
      // k == 0 and the new parabola dominates everywhere.
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      z[1] = std::numeric_limits<double>::infinity();
      continue;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    d[static_cast<std::size_t>(q)] = static_cast<double>(q - p) * (q - p) + f[static_cast<std::size_t>(p)];
  }
  for (int q = 0; q < n; ++q) f[static_cast<std::size_t>(q)] = std::min(d[static_cast<std::size_t>(q)], kFar);
}

}  // namespace

Vec3 DistanceField::voxel_center(int i, int j, int k) const {
  return origin_ + Vec3{(i + 0.5) * cell_, (j + 0.5) * cell_, (k + 0.5) * cell_};
}

DistanceField build_distance_field(const VoxelWorld& world) {
  world.validate();
  DistanceField f;
  f.dims_ = world.dims;
  f.cell_ = world.cell_size;
  f.origin_ = world.origin;
  f.z_min_ = world.z_min;
  f.z_max_ = world.z_max;

  // Padded grid with a one-voxel obstacle shell.
  const int px = world.dims[0] + 2;
  const int py = world.dims[1] + 2;
  const int pz = world.dims[2] + 2;
  auto pidx = [px, py](int i, int j, int k) {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(py) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(px) +
           static_cast<std::size_t>(i);
  };
  std::vector<double> grid(static_cast<std::size_t>(px) * py * pz, 0.0);
  for (int k = 0; k < world.dims[2]; ++k) {
    for (int j = 0; j < world.dims[1]; ++j) {
      for (int i = 0; i < world.dims[0]; ++i) {
        const Vec3 c = f.voxel_center(i, j, k);
        bool occ = c.z < world.z_min || c.z > world.z_max;
        for (const auto& b : world.boxes) {
          if (occ) break;
          occ = b.contains(c);
        }
        grid[pidx(i + 1, j + 1, k + 1)] = occ ? 0.0 : kFar;
      }
    }
  }

  const int longest = std::max({px, py, pz});
  std::vector<double> line(static_cast<std::size_t>(longest)), out(static_cast<std::size_t>(longest));
  std::vector<int> v(static_cast<std::size_t>(longest));
  std::vector<double> z(static_cast<std::size_t>(longest) + 1);

  auto pass = [&](int n, auto&& at) {
    line.resize(static_cast<std::size_t>(n));
    out.resize(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) line[static_cast<std::size_t>(q)] = at(q);
    edt_1d(line, out, v, z);
    for (int q = 0; q < n; ++q) at(q) = line[static_cast<std::size_t>(q)];
  };
  for (int k = 0; k < pz; ++k) {
    for (int j = 0; j < py; ++j) pass(px, [&](int q) -> double& { return grid[pidx(q, j, k)]; });
  }
  for (int k = 0; k < pz; ++k) {
    for (int i = 0; i < px; ++i) pass(py, [&](int q) -> double& { return grid[pidx(i, q, k)]; });
  }
  for (int j = 0; j < py; ++j) {
    for (int i = 0; i < px; ++i) pass(pz, [&](int q) -> double& { return grid[pidx(i, j, q)]; });
  }

  f.dist_.resize(static_cast<std::size_t>(world.dims[0]) * world.dims[1] * world.dims[2]);
  for (int k = 0; k < world.dims[2]; ++k) {
    for (int j = 0; j < world.dims[1]; ++j) {
      for (int i = 0; i < world.dims[0]; ++i) {
        f.dist_[f.index(i, j, k)] = std::sqrt(grid[pidx(i + 1, j + 1, k + 1)]) * f.cell_;
      }
    }
  }
  return f;
}

double clearance_threshold(const DistanceField& field, const PlannerConfig& cfg) {
  return cfg.clearance + 0.5 * std::sqrt(3.0) * field.cell_size();
}

bool state_valid(const Vec3& p, const DistanceField& field, const PlannerConfig& cfg) {
  if (p.z < field.z_min() || p.z > field.z_max()) return false;
  const auto v = field.voxel_of(p);
  if (!v) return false;
  return field.at((*v)[0], (*v)[1], (*v)[2]) >= clearance_threshold(field, cfg);
}

bool primitive_collision_free(const MotionPrimitive& prim, const DistanceField& field, const PlannerConfig& cfg,
                              int refine) {
  constexpr double kTol = 1e-9;
  if (prim.accel.maxAbs() > cfg.u_max + kTol) return false;
  const State end = primitive_end(prim);
  if (prim.start.velocity.maxAbs() > cfg.v_max + kTol || end.velocity.maxAbs() > cfg.v_max + kTol) return false;

  // Speed along a constant-acceleration segment peaks at an endpoint.
  const double speed = std::max(prim.start.velocity.norm(), end.velocity.norm());
  const double travel = speed * prim.duration;
  const double threshold = clearance_threshold(field, cfg);

  // Nearest-voxel lookups differ from the true distance by at most one voxel
  // diagonal, so a start deep inside free space clears the whole segment.
  const Vec3& p0 = prim.start.position;
  const bool start_in_band = p0.z >= field.z_min() && p0.z <= field.z_max();
  const double d0 = field.distance(p0);
  if (refine == 0 && start_in_band && d0 >= threshold && d0 - travel - std::sqrt(3.0) * field.cell_size() >= threshold &&
      p0.z - travel >= field.z_min() && p0.z + travel <= field.z_max()) {
    return true;
  }

  const double step = 0.5 * field.cell_size();
  long n = std::max(1L, static_cast<long>(std::ceil(travel / step)));
  n <<= refine;
  const double slack = std::sqrt(3.0) * field.cell_size();
  const Vec3& v0 = prim.start.velocity;
  // Samples before `safe_until` are certified by an earlier lookup: the field
  // is 1-Lipschitz between voxel centers, so they would pass the check too.
  double safe_until = -1.0;
  for (long s = 0; s <= n; ++s) {
    const double t = std::min(prim.duration * static_cast<double>(s) / static_cast<double>(n), prim.duration);
    if (t < safe_until) continue;
    const Vec3 pos = s == 0 ? p0 : p0 + t * v0 + (0.5 * t * t) * prim.accel;
    if (pos.z < field.z_min() || pos.z > field.z_max()) return false;
    const double d = s == 0 ? d0 : field.distance(pos);
    if (d < threshold) return false;
    if (speed > 0.0) {
      const double r = std::min({d - slack - threshold, pos.z - field.z_min(), field.z_max() - pos.z});
      if (r > 0.0) safe_until = t + r / speed;
    }
  }
  return true;
}

}  // namespace mres
