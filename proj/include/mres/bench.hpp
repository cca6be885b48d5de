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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mres/core.hpp"
#include "mres/distance_field.hpp"
#include "mres/heuristic.hpp"
#include "mres/search.hpp"
#include "mres/world.hpp"

namespace mres {

struct Task {
  int id = 0;
  State start;
  Vec3 goal;
  std::uint64_t seed = 0;
};

/// A planner variant: lattice mode, heuristic and search scheme.
struct Method {
  LatticeMode mode = LatticeMode::Uniform;
  HeuristicKind heuristic = HeuristicKind::OneD;
  SearchScheme scheme = SearchScheme::AStar;

  /// "mode/heuristic/scheme", e.g. "mres-var/h1d/level".
  std::string name() const;
  bool operator==(const Method&) const = default;
};

Method method_from_string(const std::string& name);

/// Comma-separated method names; "all" expands to the full 3x2x2 matrix of
/// h1d/htime heuristics.
std::vector<Method> parse_matrix(const std::string& spec);
std::vector<Method> full_matrix();

/// Start at the map center, 2 m altitude, at rest.
State default_start(const VoxelWorld& world);

/// Goals lie on the 0.5 m grid anchored at the start so that every lattice
/// used by the planner contains them.
double goal_grid_spacing(const PlannerConfig& cfg);

struct TaskSampling {
  int n_tasks = 25;
  std::uint64_t seed = 1;
  /// Upper bound on the start-goal distance; 0 disables it.
  double max_goal_distance = 0.0;
  double min_goal_distance = 0.5;
  int max_rejections = 100000;
};

/// Rejection-samples goals uniformly over the flyable volume; each goal keeps
/// at least max(clearance threshold, dp of its level) from obstacles.
std::vector<Task> generate_tasks(const VoxelWorld& world, const DistanceField& field, const TaskSampling& sampling,
                                 const PlannerConfig& cfg);

/// Obstacle added to the world after a given replanning step.
struct Reveal {
  int after_step = 0;
  Box box;
};

struct WorldStream {
  VoxelWorld base;
  std::vector<Reveal> reveals;
};

struct EpisodeOptions {
  int max_steps = 100;
  bool capture_trace = false;
};

struct EpisodeMetrics {
  bool success = false;
  SearchStatus last_status = SearchStatus::Exhausted;
  std::string failure;  // empty on success
  int steps = 0;
  std::int64_t max_expansions = 0;
  std::int64_t total_expansions = 0;
  double max_time_s = 0.0;
  double cost = 0.0;
  /// Executed motion and the state at the start of each replanning step.
  std::vector<MotionPrimitive> executed;
  std::vector<State> replan_states;
  /// f-value trace of every expansion of the episode (when captured).
  std::vector<TraceRow> trace;
  /// Planned trajectories of each step, for replay checks.
  std::vector<std::vector<MotionPrimitive>> plans;
  std::vector<std::uint64_t> plan_world_versions;
};

/// Nearest point of the cubic lattice {anchor + k * spacing}.
Vec3 snap_to_lattice(const Vec3& p, const Vec3& anchor, double spacing);

/// Grid origin of a replanning step: the current position rounded onto the
/// coarsest-level lattice through the goal, so the goal is a vertex of every
/// level and coarse vertices keep an even cell offset to it.
Vec3 replanning_origin(const Vec3& position, const Vec3& goal, const PlannerConfig& cfg);

/// Receding-horizon loop: plan from the current state, execute replan_horizon
/// seconds, reveal pending obstacles, repeat until the goal is reached.
EpisodeMetrics run_replanning_episode(const Task& task, const Method& method, const PlannerConfig& cfg,
                                      const WorldStream& stream, const Heuristic1DTable& table,
                                      const EpisodeOptions& options = {});

/// Table range that covers every start-goal offset in the world.
double table_distance_for(const VoxelWorld& world);

struct SuiteConfig {
  VoxelWorld world;
  std::vector<Reveal> reveals;
  TaskSampling sampling;
  std::vector<Method> methods;
  PlannerConfig cfg;
  EpisodeOptions episode;
  std::string table_cache;  // empty: build in memory
};

struct EpisodeRecord {
  Method method;
  Task task;
  EpisodeMetrics metrics;
};

/// Aggregate over a set of tasks. `scope` is "all", "common" (tasks solved by
/// every method) or "pair:<method>" (tasks solved by both).
struct AggregateRow {
  std::string method;
  std::string scope;
  int tasks = 0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
  double mean_max_expansions = 0.0;
  double mean_max_time_s = 0.0;
  double mean_cost = 0.0;
};

struct SuiteResult {
  std::vector<Task> tasks;
  std::vector<EpisodeRecord> episodes;  // sorted by (method name, task id)
  std::vector<AggregateRow> aggregates;
};

SuiteResult run_suite(const SuiteConfig& suite);

/// Aggregates are pure functions of the episode rows.
std::vector<AggregateRow> aggregate(const std::vector<EpisodeRecord>& episodes, const std::vector<Method>& methods);

/// Results CSV: `method,task,success,steps,max_expansions,max_time_s,cost`;
/// episode rows first, then aggregate rows whose task column holds the scope.
void write_results_csv(const SuiteResult& result, std::ostream& out, bool include_time = true);
void write_tasks_csv(const std::vector<Task>& tasks, std::ostream& out);

/// Per-episode artifacts consumed by the report subcommand.
void write_episode_json(const EpisodeRecord& record, std::ostream& out);

}  // namespace mres
