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

#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mres/bench.hpp"
#include "oracles.hpp"

using namespace mres;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

EpisodeRecord record(const std::string& method, int task, bool success, std::int64_t expansions, double cost) {
  EpisodeRecord r;
  r.method = method_from_string(method);
  r.task.id = task;
  r.metrics.success = success;
  r.metrics.steps = 3;
  r.metrics.max_expansions = expansions;
  r.metrics.cost = cost;
  return r;
}

}  // namespace

TEST_CASE("method names") {
  const Method m = method_from_string("mres-var/h1d/level");
  CHECK(m.mode == LatticeMode::MResVariable);
  CHECK(m.heuristic == HeuristicKind::OneD);
  CHECK(m.scheme == SearchScheme::LevelAStar);
  CHECK(m.name() == "mres-var/h1d/level");
  CHECK_THROWS_AS(method_from_string("mres-var/h1d"), InputError);
  CHECK_THROWS_AS(method_from_string("grid/h1d/astar"), InputError);

  CHECK(full_matrix().size() == 12);
  CHECK(parse_matrix("all") == full_matrix());
  const auto two = parse_matrix("uniform/htime/astar,mres-fixed/zero/level");
  REQUIRE(two.size() == 2);
  CHECK(two[1].heuristic == HeuristicKind::Zero);
}

TEST_CASE("lattice snapping") {
  CHECK(snap_to_lattice(Vec3{1.2, -0.3, 2.76}, Vec3{0, 0, 0}, 0.5) == Vec3{1.0, -0.5, 3.0});
  CHECK(snap_to_lattice(Vec3{1.2, 1.2, 1.2}, Vec3{0.25, 0.25, 0.25}, 0.5) == Vec3{1.25, 1.25, 1.25});

  const PlannerConfig cfg;
  const Vec3 goal{16, 18.5, 8};
  const Vec3 o = replanning_origin(Vec3{31.1, 32.9, 2.2}, goal, cfg);
  CHECK(o == Vec3{32, 32.5, 2});
  const Resolutions r = derive_resolutions(cfg);
  for (int level = 1; level <= cfg.num_levels; ++level) {
    for (int a = 0; a < 3; ++a) CHECK(is_multiple(goal[a] - o[a], r.dp_at(level)));
  }
}

TEST_CASE("generate_tasks") {
  WorldGenParams wp;
  wp.seed = 4;
  wp.n_buildings = 10;
  const VoxelWorld w = generate_world(wp);
  const DistanceField f = build_distance_field(w);
  const PlannerConfig cfg;
  TaskSampling s;
  s.n_tasks = 25;
  s.seed = 8;
  const auto a = generate_tasks(w, f, s, cfg);
  const auto b = generate_tasks(w, f, s, cfg);
  REQUIRE(a.size() == 25);
  const double threshold = clearance_threshold(f, cfg);
  const State start = default_start(w);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == static_cast<int>(i));
    CHECK(a[i].goal == b[i].goal);
    CHECK(a[i].start == start);
    CHECK(f.distance(a[i].goal) >= threshold);
    CHECK(state_valid(a[i].goal, f, cfg));
    const Vec3 off = a[i].goal - start.position;
    for (int k = 0; k < 3; ++k) CHECK(is_multiple(off[k], goal_grid_spacing(cfg)));
  }
  s.seed = 9;
  CHECK(generate_tasks(w, f, s, cfg)[0].goal != a[0].goal);
}

TEST_CASE("generate_tasks on an empty world and an impossible one") {
  const VoxelWorld w = make_empty_world(20, 20, 10, 0.25);
  const DistanceField f = build_distance_field(w);
  const PlannerConfig cfg;
  TaskSampling s;
  s.n_tasks = 40;
  const auto tasks = generate_tasks(w, f, s, cfg);
  CHECK(tasks.size() == 40);
  for (const auto& t : tasks) CHECK(state_valid(t.goal, f, cfg));

  s.min_goal_distance = 100.0;
  s.max_rejections = 1000;
  CHECK_THROWS_AS(generate_tasks(w, f, s, cfg), GenerationError);
}

TEST_CASE("replanning episode, short hop") {
  const VoxelWorld w = make_empty_world(20, 20, 10, 0.25);
  const PlannerConfig cfg;
  const Heuristic1DTable table = build_1d_table(cfg, table_distance_for(w));
  Task t;
  t.start = State{{10, 10, 2}, {}};
  t.goal = Vec3{10.5, 10, 2};
  for (const auto& m : full_matrix()) {
    const EpisodeMetrics e = run_replanning_episode(t, m, cfg, WorldStream{w, {}}, table);
    CHECK(e.success);
    CHECK(e.steps == 1);
    CHECK(e.cost == doctest::Approx(20.0));
    CHECK(e.failure.empty());
  }
}

TEST_CASE("replanning episode, several steps with a reveal") {
  WorldGenParams wp;
  wp.seed = 3;
  wp.size_x = 32;
  wp.size_y = 32;
  wp.n_buildings = 4;
  const VoxelWorld w = generate_world(wp);
  const PlannerConfig cfg;
  const Heuristic1DTable table = build_1d_table(cfg, table_distance_for(w));
  Task t;
  t.start = default_start(w);
  t.goal = t.start.position + Vec3{-8, 6.5, 3};
  WorldStream stream{w, {Reveal{0, Box{{20, 20, 0}, {22, 22, 4}}}}};
  EpisodeOptions opt;
  opt.capture_trace = true;
  const EpisodeMetrics e =
      run_replanning_episode(t, method_from_string("mres-var/h1d/level"), cfg, stream, table, opt);
  REQUIRE(e.success);
  CHECK(e.steps > 1);
  CHECK(e.replan_states.size() == static_cast<std::size_t>(e.steps));
  CHECK(static_cast<std::int64_t>(e.trace.size()) == e.total_expansions);
  CHECK(e.plan_world_versions.front() == 0);
  if (e.plan_world_versions.size() > 1) CHECK(e.plan_world_versions[1] == 1);
  CHECK(e.cost == doctest::Approx(trajectory_cost(e.executed, cfg.rho)));
  const State end = trajectory_state(e.executed, trajectory_duration(e.executed));
  CHECK((end.position - t.goal).maxAbs() < 1e-6);
  VoxelWorld final_world = w;
  final_world.boxes.push_back(stream.reveals[0].box);
  CHECK(oracle::check_trajectory(e.executed, final_world, cfg, 0.3) == "");
}

TEST_CASE("replanning episode, unreachable goal") {
  VoxelWorld w = make_empty_world(14, 14, 6, 0.25);
  w.boxes.push_back(Box{{6.5, 6.5, 0}, {11.5, 7, 6}});
  w.boxes.push_back(Box{{6.5, 11, 0}, {11.5, 11.5, 6}});
  w.boxes.push_back(Box{{6.5, 6.5, 0}, {7, 11.5, 6}});
  w.boxes.push_back(Box{{11, 6.5, 0}, {11.5, 11.5, 6}});
  const PlannerConfig cfg;
  const Heuristic1DTable table = build_1d_table(cfg, table_distance_for(w));
  Task t;
  t.start = State{{9, 9, 3}, {}};
  t.goal = Vec3{3, 3, 3};
  const EpisodeMetrics e =
      run_replanning_episode(t, method_from_string("uniform/h1d/astar"), cfg, WorldStream{w, {}}, table);
  CHECK_FALSE(e.success);
  CHECK(e.last_status == SearchStatus::Exhausted);
  CHECK(e.failure == "exhausted");
}

TEST_CASE("aggregation over intersections") {
  std::vector<EpisodeRecord> eps{
      record("uniform/h1d/astar", 0, true, 100, 10.0),  record("uniform/h1d/astar", 1, true, 300, 30.0),
      record("uniform/htime/astar", 0, true, 500, 10.0), record("uniform/htime/astar", 1, false, 900, 0.0),
      record("mres-var/h1d/level", 0, true, 10, 11.0),   record("mres-var/h1d/level", 1, true, 20, 33.0),
  };
  const std::vector<Method> methods{method_from_string("uniform/h1d/astar"), method_from_string("uniform/htime/astar"),
                                    method_from_string("mres-var/h1d/level")};
  const auto rows = aggregate(eps, methods);
  auto find = [&](const std::string& m, const std::string& scope) {
    for (const auto& r : rows) {
      if (r.method == m && r.scope == scope) return r;
    }
    FAIL("missing row " << m << " " << scope);
    return AggregateRow{};
  };
  const auto all = find("uniform/h1d/astar", "all");
  CHECK(all.tasks == 2);
  CHECK(all.mean_max_expansions == doctest::Approx(200.0));
  const auto common = find("uniform/h1d/astar", "common");
  CHECK(common.tasks == 1);
  CHECK(common.mean_max_expansions == doctest::Approx(100.0));
  const auto pair = find("uniform/htime/astar", "pair:uniform/h1d/astar");
  CHECK(pair.tasks == 1);
  CHECK(pair.success_rate == doctest::Approx(0.5));
  CHECK(pair.mean_max_expansions == doctest::Approx(500.0));
  CHECK(find("mres-var/h1d/level", "all").mean_cost == doctest::Approx(22.0));
  // No pair rows across different modes or schemes.
  for (const auto& r : rows) CHECK(r.scope.find("mres-var") == std::string::npos);
  // Rows are a pure function of the episode rows.
  CHECK(aggregate(eps, methods).size() == rows.size());
}

TEST_CASE("suite with one method and one task") {
  SuiteConfig suite;
  suite.world = make_empty_world(16, 16, 10, 0.25);
  suite.sampling.n_tasks = 1;
  suite.sampling.max_goal_distance = 1.0;
  suite.methods = {method_from_string("uniform/h1d/astar")};
  const SuiteResult r = run_suite(suite);
  REQUIRE(r.episodes.size() == 1);
  CHECK(r.episodes[0].metrics.success);
  std::ostringstream out;
  write_results_csv(r, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "method,task,success,steps,max_expansions,max_time_s,cost");
  CHECK(lines[1].rfind("uniform/h1d/astar,0,1,", 0) == 0);
  CHECK(lines[2].rfind("uniform/h1d/astar,all,1.000000,", 0) == 0);

  std::ostringstream no_time;
  write_results_csv(r, no_time, false);
  CHECK(lines_of(no_time.str())[1].find(",-,") != std::string::npos);

  std::ostringstream tasks;
  write_tasks_csv(r.tasks, tasks);
  CHECK(lines_of(tasks.str()).size() == 2);

  std::ostringstream js;
  write_episode_json(r.episodes[0], js);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["method"] == "uniform/h1d/astar");
  CHECK(j["success"] == true);
  CHECK(j["executed"].size() == r.episodes[0].metrics.executed.size());
}

TEST_CASE("suite output is deterministic") {
  SuiteConfig suite;
  WorldGenParams wp;
  wp.seed = 12;
  wp.size_x = 32;
  wp.size_y = 32;
  wp.n_buildings = 5;
  suite.world = generate_world(wp);
  suite.sampling.n_tasks = 3;
  suite.sampling.max_goal_distance = 6.0;
  suite.methods = parse_matrix("mres-var/h1d/level,uniform/h1d/level,mres-fixed/h1d/level");
  std::ostringstream a;
  std::ostringstream b;
  write_results_csv(run_suite(suite), a, false);
  write_results_csv(run_suite(suite), b, false);
  CHECK(a.str() == b.str());
}
