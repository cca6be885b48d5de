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

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mres/core.hpp"

namespace mres {

class LookupError : public Error {
 public:
  using Error::Error;
};

class TableBuildError : public Error {
 public:
  using Error::Error;
};

constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/// Optimal cost-to-go of the 1D double integrator from (distance, velocity)
/// to the goal at rest, using Level-1 commands of duration tau1.
struct Heuristic1DEntry {
  double cost = kInfiniteCost;  // rho * time + effort
  double time = kInfiniteCost;  // s
  double effort = kInfiniteCost;
  /// (accel m/s^2, duration s) steps that realize the entry.
  std::vector<std::pair<double, double>> sequence;

  bool reachable() const { return std::isfinite(cost); }
};

/// Lookup table over signed distance-to-goal (Level-1 position cells) and
/// velocity (Level-1 velocity cells). Cells where distance + velocity is odd
/// cannot reach the goal with Level-1 primitives and hold +inf.
class Heuristic1DTable {
 public:
  /// Largest table that build() accepts, in entries.
  static constexpr std::int64_t kDefaultEntryCap = 50'000'000;

  Heuristic1DTable() = default;

  /// Exact Dijkstra over the 1D lattice, run backwards from (0, 0).
  static Heuristic1DTable build(const PlannerConfig& cfg, double max_distance,
                                std::int64_t entry_cap = kDefaultEntryCap);

  double rho() const { return rho_; }
  double tau1() const { return tau1_; }
  double du() const { return du_; }
  double u_max() const { return u_max_; }
  double v_max() const { return v_max_; }
  double max_distance() const { return max_distance_; }
  double dp1() const { return 0.5 * tau1_ * tau1_ * du_; }
  double dv1() const { return tau1_ * du_; }

  /// Exposed distance range is [-D, D] cells, velocity range [-V, V] cells.
  int distance_cells() const { return d_exposed_; }
  int velocity_cells() const { return v_cells_; }
  int command_steps() const { return c_steps_; }

  bool contains(int d, int n) const { return std::abs(d) <= d_exposed_ && std::abs(n) <= v_cells_; }

  double cost(int d, int n) const { return cell(d, n).cost; }
  double time(int d, int n) const { return cell(d, n).time; }
  double effort(int d, int n) const { return cell(d, n).effort; }

  /// Command multiples of du, first step first. Empty for (0,0) and unreachable cells.
  std::vector<int> command_sequence(int d, int n) const;
  Heuristic1DEntry entry(int d, int n) const;

  /// Identity of the inputs the table depends on.
  std::uint64_t cache_key() const { return cache_key_; }
  static std::uint64_t cache_key_for(const PlannerConfig& cfg, double max_distance);

  void save(const std::string& path) const;
  static Heuristic1DTable load(const std::string& path);

 private:
  struct Cell {
    double cost = kInfiniteCost;
    double time = kInfiniteCost;
    double effort = kInfiniteCost;
    std::int8_t next = 0;  // command multiple of the first step
  };

  // Throws LookupError outside the exposed range.
  const Cell& cell(int d, int n) const;
  const Cell& raw(int d, int n) const {
    return cells_[static_cast<std::size_t>(d + d_total_) * static_cast<std::size_t>(2 * v_cells_ + 1) +
                  static_cast<std::size_t>(n + v_cells_)];
  }
  Cell& raw(int d, int n) {
    return cells_[static_cast<std::size_t>(d + d_total_) * static_cast<std::size_t>(2 * v_cells_ + 1) +
                  static_cast<std::size_t>(n + v_cells_)];
  }

  double rho_ = 0.0;
  double tau1_ = 0.0;
  double du_ = 0.0;
  double u_max_ = 0.0;
  double v_max_ = 0.0;
  double max_distance_ = 0.0;
  int d_exposed_ = 0;
  int d_total_ = 0;  // exposed range plus an overshoot margin
  int v_cells_ = 0;
  int c_steps_ = 0;
  std::uint64_t cache_key_ = 0;
  std::vector<Cell> cells_;
};

Heuristic1DTable build_1d_table(const PlannerConfig& cfg, double max_distance);

/// Loads the table from `cache_path` when its key matches, otherwise builds
/// and writes it. An empty path disables caching.
Heuristic1DTable load_or_build_table(const PlannerConfig& cfg, double max_distance, const std::string& cache_path);

/// Lower bound on the control effort of one axis that is not the time-critical one.
double axis_control_bound(double distance, double velocity, const PlannerConfig& cfg);

/// Minimum time to bring one axis from (distance-to-goal, velocity) to rest at
/// the goal under |u| <= u_max, |v| <= v_max with continuous control.
double axis_min_time(double distance, double velocity, double u_max, double v_max);

/// Composed 1D heuristic: rho * T + table effort of the slowest axis + effort
/// bounds on the others. Admissible, not consistent.
double h_1d(const State& s, const Vec3& goal, const Heuristic1DTable& table, const PlannerConfig& cfg);

/// rho times the largest per-axis minimum time. Admissible and consistent.
double h_time_bound(const State& s, const Vec3& goal, const PlannerConfig& cfg);

}  // namespace mres
