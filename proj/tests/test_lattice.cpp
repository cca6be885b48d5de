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

#include <random>

#include "doctest.h"
#include "mres/distance_field.hpp"
#include "mres/heuristic.hpp"
#include "mres/lattice.hpp"
#include "mres/world.hpp"

using namespace mres;

namespace {

struct Fixture {
  PlannerConfig cfg;
  VoxelWorld world = make_empty_world(64, 64, 10, 0.25);
  DistanceField field = build_distance_field(world);
  Vec3 origin{32, 32, 5};
};

}  // namespace

TEST_CASE("level_of") {
  const PlannerConfig cfg;
  const MultiresGrid g = make_grid(Vec3{10, 10, 5}, cfg, LatticeMode::MResFixed);
  CHECK(g.halfwidth[0] == doctest::Approx(4.0));
  CHECK(g.halfwidth[3] == doctest::Approx(32.0));
  CHECK(g.level_of(Vec3{10, 10, 5}) == 1);
  CHECK(g.level_of(Vec3{14, 10, 5}) == 1);
  CHECK(g.level_of(Vec3{14.01, 10, 5}) == 2);
  CHECK(g.level_of(Vec3{10, 2, 5}) == 2);
  CHECK(g.level_of(Vec3{10, 10, 21}) == 3);
  CHECK(g.level_of(Vec3{10, 10, 27}) == 4);
  CHECK(g.level_of(Vec3{100, 10, 5}) == 4);

  const MultiresGrid u = make_grid(Vec3{10, 10, 5}, cfg, LatticeMode::Uniform);
  CHECK(u.level_of(Vec3{100, 10, 5}) == 1);
}

TEST_CASE("adjust_axis") {
  CHECK(adjust_axis(0, 1, 0.5, 0.5) == doctest::Approx(0.0));
  CHECK(adjust_axis(0, 1, 0.5, 0.75) == doctest::Approx(2.0));
  CHECK(adjust_axis(0, 1, 0.5, 0.25) == doctest::Approx(-2.0));
}

TEST_CASE("variable_duration") {
  const Resolutions r = derive_resolutions(PlannerConfig{});
  CHECK(variable_duration(4, 0, 1, r) == doctest::Approx(0.5));
  CHECK(variable_duration(0, 0, 1, r) == doctest::Approx(0.5));
  CHECK(variable_duration(0, 0, 3, r) == doctest::Approx(0.5));
  CHECK(variable_duration(0, 2, 3, r) == doctest::Approx(1.0));
  CHECK(variable_duration(0, 2, 4, r) == doctest::Approx(2.0));
  CHECK(variable_duration(1, 0, 4, r) == doctest::Approx(2.0));
}

TEST_CASE("level command sets") {
  const PlannerConfig cfg;
  CHECK(level_axis_commands(1, cfg) == std::vector<double>{-2, 0, 2});
  CHECK(level_axis_commands(2, cfg) == std::vector<double>{-1, 0, 1});
  CHECK(level_axis_commands(3, cfg) == std::vector<double>{-1, 0, 1});
  CHECK(level_axis_commands(4, cfg) == std::vector<double>{-0.5, 0, 0.5});
}

TEST_CASE("uniform successors from rest") {
  Fixture fx;
  const MultiresGrid g = make_grid(fx.origin, fx.cfg, LatticeMode::Uniform);
  const LatticeState s = make_lattice_state(State{fx.origin, {}}, g);
  const auto succ = successors(s, LatticeMode::Uniform, g, fx.cfg, fx.field);
  REQUIRE(succ.size() == 27);
  bool found = false;
  for (const auto& e : succ) {
    if (e.primitive.accel == Vec3{2, 0, 0}) {
      found = true;
      CHECK(e.end.state.position == fx.origin + Vec3{0.25, 0, 0});
      CHECK(e.end.state.velocity == Vec3{1, 0, 0});
      CHECK(e.cost == doctest::Approx(10.0));
      CHECK(e.primitive.duration == 0.5);
    }
  }
  CHECK(found);
}

TEST_CASE("successors are filtered by obstacles") {
  Fixture fx;
  fx.world.boxes.push_back(Box{{33, 0, 0}, {40, 64, 10}});
  fx.field = build_distance_field(fx.world);
  const MultiresGrid g = make_grid(Vec3{31, 32, 5}, fx.cfg, LatticeMode::Uniform);
  // At rest 1.75 m from the wall: only moves toward it are cut.
  const LatticeState rest = make_lattice_state(State{Vec3{31.25, 32, 5}, {}}, g);
  const auto succ = successors(rest, LatticeMode::Uniform, g, fx.cfg, fx.field);
  CHECK(succ.size() >= 18);
  CHECK(succ.size() < 27);
  // Full speed toward the wall cannot stop in time.
  const LatticeState fast = make_lattice_state(State{Vec3{31.25, 32, 5}, {4, 0, 0}}, g);
  CHECK(successors(fast, LatticeMode::Uniform, g, fx.cfg, fx.field).empty());
}

TEST_CASE("fixed-step level-2 edge from rest") {
  Fixture fx;
  const MultiresGrid g = make_grid(fx.origin, fx.cfg, LatticeMode::MResFixed);
  const Vec3 p = fx.origin + Vec3{5, 0, 0};
  const LatticeState s = make_lattice_state(State{p, {}}, g);
  REQUIRE(s.level == 2);
  CHECK_FALSE(s.velocity_offgrid);
  const auto succ = successors(s, LatticeMode::MResFixed, g, fx.cfg, fx.field);
  bool found = false;
  for (const auto& e : succ) {
    if (e.primitive.accel == Vec3{1, 0, 0} && e.primitive.duration == 1.0) {
      found = true;
      CHECK(e.end.state.position == p + Vec3{0.5, 0, 0});
      CHECK(e.end.state.velocity == Vec3{1, 0, 0});
    }
  }
  CHECK(found);
}

TEST_CASE("special actions") {
  const PlannerConfig cfg;
  const Resolutions r = derive_resolutions(cfg);
  const auto cmds = special_action_commands(State{{}, {3, -1, 0}}, 2, r, cfg);
  CHECK(cmds[0] == Vec3{-2, 1, 0});
  CHECK(cmds[1] == Vec3{1, -2, 0});
}

TEST_CASE("fixed-step edges stay on the grid") {
  Fixture fx;
  const MultiresGrid g = make_grid(fx.origin, fx.cfg, LatticeMode::MResFixed);
  std::mt19937_64 rng(3);
  std::vector<LatticeState> frontier{make_lattice_state(State{fx.origin, {}}, g)};
  const double dv1 = g.res.dv_at(1);
  int edges = 0;
  for (int i = 0; i < 400; ++i) {
    const LatticeState s = frontier[rng() % frontier.size()];
    for (const auto& e : successors(s, LatticeMode::MResFixed, g, fx.cfg, fx.field)) {
      ++edges;
      CHECK(g.on_grid(e.end.state.position, e.end.level));
      const Vec3 dv = e.end.state.velocity - s.state.velocity;
      for (int a = 0; a < 3; ++a) CHECK(is_multiple(dv[a], dv1));
      CHECK(e.primitive.accel.maxAbs() <= fx.cfg.u_max + 1e-9);
      CHECK(e.end.state.velocity.maxAbs() <= fx.cfg.v_max + 1e-9);
      const State end = primitive_end(e.primitive);
      CHECK((end.position - e.end.state.position).maxAbs() < 1e-9);
      CHECK((end.velocity - e.end.state.velocity).maxAbs() < 1e-9);
      if (frontier.size() < 2000) frontier.push_back(e.end);
    }
  }
  CHECK(edges > 1000);
}

TEST_CASE("successor ends are unique keys") {
  Fixture fx;
  for (LatticeMode mode : {LatticeMode::Uniform, LatticeMode::MResFixed, LatticeMode::MResVariable}) {
    const MultiresGrid g = make_grid(fx.origin, fx.cfg, mode);
    const LatticeState s = make_lattice_state(State{fx.origin + Vec3{6, -3, 0}, {1, -2, 0}}, g);
    const auto succ = successors(s, mode, g, fx.cfg, fx.field);
    CHECK_FALSE(succ.empty());
    for (std::size_t i = 0; i < succ.size(); ++i) {
      for (std::size_t j = i + 1; j < succ.size(); ++j) CHECK_FALSE(succ[i].end.key == succ[j].end.key);
    }
  }
}

TEST_CASE("goal actions") {
  Fixture fx;
  const Heuristic1DTable table = Heuristic1DTable::build(fx.cfg, 8.0);
  const MultiresGrid g = make_grid(fx.origin, fx.cfg, LatticeMode::MResFixed);

  SUBCASE("level 1, quarter cell ahead is out of reach") {
    const LatticeState s = make_lattice_state(State{fx.origin, {}}, g);
    CHECK_FALSE(goal_actions(s, fx.origin + Vec3{0.25, 0, 0}, table, g, fx.cfg, fx.field).has_value());
  }
  SUBCASE("level 2, half a meter ahead") {
    const Vec3 p = fx.origin + Vec3{5, 0, 0};
    const LatticeState s = make_lattice_state(State{p, {}}, g);
    REQUIRE(s.level == 2);
    const auto ga = goal_actions(s, p + Vec3{0.5, 0, 0}, table, g, fx.cfg, fx.field);
    REQUIRE(ga.has_value());
    CHECK(ga->goal_action);
    CHECK(ga->cost == doctest::Approx(20.0));
    REQUIRE(ga->sequence.size() == 2);
    CHECK(ga->sequence[0].accel == Vec3{2, 0, 0});
    CHECK(ga->sequence[1].accel == Vec3{-2, 0, 0});
    CHECK(ga->end.key.level == 0);
  }
  SUBCASE("at the goal") {
    const LatticeState s = make_lattice_state(State{fx.origin, {}}, g);
    const auto ga = goal_actions(s, fx.origin, table, g, fx.cfg, fx.field);
    REQUIRE(ga.has_value());
    CHECK(ga->cost == 0.0);
    CHECK(ga->sequence.empty());
  }
  SUBCASE("blocked goal action") {
    fx.world.boxes.push_back(Box{{fx.origin.x + 5.75, 0, 0}, {fx.origin.x + 7, 64, 10}});
    fx.field = build_distance_field(fx.world);
    const Vec3 p = fx.origin + Vec3{5, 0, 0};
    const LatticeState s = make_lattice_state(State{p, {}}, g);
    CHECK_FALSE(goal_actions(s, p + Vec3{0.5, 0, 0}, table, g, fx.cfg, fx.field).has_value());
  }
}
