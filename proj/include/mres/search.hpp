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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mres/core.hpp"
#include "mres/distance_field.hpp"
#include "mres/heuristic.hpp"
#include "mres/lattice.hpp"

namespace mres {

enum class HeuristicKind { OneD, TimeBound, Zero };
enum class SearchScheme { AStar, LevelAStar };
enum class SearchStatus { Found, ExpansionLimit, Exhausted };

const char* to_string(HeuristicKind h);
const char* to_string(SearchScheme s);
const char* to_string(SearchStatus s);
HeuristicKind heuristic_from_string(const std::string& name);
SearchScheme scheme_from_string(const std::string& name);

double heuristic_value(HeuristicKind kind, const State& s, const Vec3& goal, const Heuristic1DTable& table,
                       const PlannerConfig& cfg);

/// One row of the optional f-value trace.
struct TraceRow {
  std::int64_t expansion = 0;
  double f = 0.0;
  double g = 0.0;
  double h = 0.0;
  int level = 1;
};

void write_trace_csv(std::span<const TraceRow> trace, std::ostream& out);

struct SearchStats {
  std::int64_t expansions = 0;
  std::int64_t pushes = 0;
  std::vector<TraceRow> trace;  // filled only when requested
  double wall_time_s = 0.0;
};

struct SearchNode {
  LatticeState lattice_state;
  double g = 0.0;
  double f = 0.0;
  std::int32_t parent = -1;
  // Edge from the parent: one primitive (accel, duration) or a goal-action sequence.
  Vec3 accel;
  double duration = 0.0;
  std::vector<MotionPrimitive> sequence;
  bool goal_action = false;
  bool closed = false;

  double h() const { return f - g; }
};

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::vector<MotionPrimitive> trajectory;
  double cost = 0.0;
  SearchStats stats;
};

/// Everything a single search reads. All references must outlive the call.
struct SearchProblem {
  State start;
  State goal;
  LatticeMode mode = LatticeMode::Uniform;
  HeuristicKind heuristic = HeuristicKind::OneD;
  const MultiresGrid* grid = nullptr;
  const PlannerConfig* cfg = nullptr;
  const DistanceField* field = nullptr;
  const Heuristic1DTable* table = nullptr;
  bool capture_trace = false;
};

/// Classic A*: one queue ordered by f (larger g, then insertion order, breaks
/// ties), closed nodes re-opened on strictly better g, terminates when the
/// goal is popped.
SearchResult astar(const SearchProblem& problem);

/// Level-based expansion: a queue per resolution level; among queue tops whose
/// f is within one step cost of the global minimum, expand the lowest h.
/// Terminates as soon as the goal is pushed.
SearchResult level_astar(const SearchProblem& problem);

SearchResult plan(const SearchProblem& problem, SearchScheme scheme);

/// Walks parent edges back from `goal_index` and replays the primitives;
/// throws InternalError on a broken chain or if the replay misses `goal`.
std::vector<MotionPrimitive> reconstruct_trajectory(std::span<const SearchNode> nodes, std::int32_t goal_index,
                                                    const State& goal);

double trajectory_cost(std::span<const MotionPrimitive> trajectory, double rho);
double trajectory_duration(std::span<const MotionPrimitive> trajectory);

/// State at time t along a primitive chain (clamped to its end).
State trajectory_state(std::span<const MotionPrimitive> trajectory, double t);

}  // namespace mres
