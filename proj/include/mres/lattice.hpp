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
#include <span>
#include <vector>

#include "mres/core.hpp"
#include "mres/distance_field.hpp"
#include "mres/heuristic.hpp"

namespace mres {

/// Nested cubic resolution regions centered on the planning origin. Level i
/// spans a Chebyshev half-extent of 2^(i-1) times the Level-1 half-extent.
struct MultiresGrid {
  Vec3 origin;
  int num_levels = 1;
  std::array<double, kMaxLevels> halfwidth{};
  Resolutions res;

  /// Smallest level whose region contains p; clamps to num_levels outside.
  int level_of(const Vec3& p) const;

  /// Nearest point of the level's position grid.
  Vec3 snap(const Vec3& p, int level) const;
  bool on_grid(const Vec3& p, int level, double tol = 1e-9) const;
};

/// Uniform mode collapses the grid to a single Level-1 region.
MultiresGrid make_grid(const Vec3& origin, const PlannerConfig& cfg, LatticeMode mode);

struct LatticeState {
  State state;
  int level = 1;
  LatticeKey key;
  /// Velocity (or position) not on the state's level grid; corrected when expanding.
  bool velocity_offgrid = false;
};

/// Builds the lattice vertex for an arbitrary continuous state.
LatticeState make_lattice_state(const State& s, const MultiresGrid& grid);

/// Goal vertex; its key uses the reserved level 0 so ordinary vertices never alias it.
LatticeState make_goal_state(const Vec3& goal, const MultiresGrid& grid);

struct Successor {
  MotionPrimitive primitive;
  /// Level-1 steps of a goal action; empty for ordinary edges.
  std::vector<MotionPrimitive> sequence;
  bool goal_action = false;
  LatticeState end;
  double cost = 0.0;

  std::span<const MotionPrimitive> primitives() const {
    if (goal_action) return {sequence.data(), sequence.size()};
    return {&primitive, 1};
  }
};

/// Acceleration that lands a primitive of the given duration on target_position.
Vec3 adjust_primitive(const State& start, double duration, const Vec3& target_position);
double adjust_axis(double p, double v, double duration, double target);

/// Smallest 2^k * tau1 (k <= 6) moving at least one level cell; tau1 otherwise.
double variable_duration(double v, double u, int level, const Resolutions& res);

/// Per-level command set of the fixed-step scheme (Level-1 commands scaled
/// by 1, 1/2, 1/2, 1/4).
std::vector<double> level_axis_commands(int level, const PlannerConfig& cfg);

/// Raw accelerations of the stop and speed-up special actions at `level`.
std::array<Vec3, 2> special_action_commands(const State& s, int level, const Resolutions& res,
                                            const PlannerConfig& cfg);

/// Grid-adjusted, collision-checked special actions (fixed-step scheme).
std::vector<Successor> special_actions(const LatticeState& s, const MultiresGrid& grid, const PlannerConfig& cfg,
                                       const DistanceField& field);

/// All valid lattice edges leaving s, deduplicated by end key (cheapest kept).
std::vector<Successor> successors(const LatticeState& s, LatticeMode mode, const MultiresGrid& grid,
                                  const PlannerConfig& cfg, const DistanceField& field);
void successors(const LatticeState& s, LatticeMode mode, const MultiresGrid& grid, const PlannerConfig& cfg,
                const DistanceField& field, std::vector<Successor>& out);

/// Direct connection to a zero-velocity goal through a sequence of Level-1
/// primitives taken from the 1D table, if the goal is reachable within the
/// state's level horizon.
std::optional<Successor> goal_actions(const LatticeState& s, const Vec3& goal, const Heuristic1DTable& table,
                                      const MultiresGrid& grid, const PlannerConfig& cfg, const DistanceField& field);

}  // namespace mres
