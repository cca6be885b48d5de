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
#include "mres/distance_field.hpp"
#include "mres/world.hpp"
#include "oracles.hpp"

using namespace mres;

namespace {

VoxelWorld one_box_world() {
  VoxelWorld w = make_empty_world(20, 20, 10, 0.25);
  w.boxes.push_back(Box{{8, 8, 0}, {12, 12, 10}});
  return w;
}

}  // namespace

TEST_CASE("generate_world is deterministic") {
  WorldGenParams p;
  p.seed = 42;
  CHECK(format_world(generate_world(p)) == format_world(generate_world(p)));
  p.seed = 43;
  WorldGenParams q;
  q.seed = 42;
  CHECK(format_world(generate_world(p)) != format_world(generate_world(q)));
}

TEST_CASE("generate_world keeps the center free") {
  WorldGenParams p;
  p.seed = 7;
  p.n_buildings = 10;
  const VoxelWorld w = generate_world(p);
  REQUIRE(w.boxes.size() == 10);
  const Vec3 c = w.center();
  for (const auto& b : w.boxes) {
    const bool overlaps = b.min.x < c.x + p.protected_halfwidth && b.max.x > c.x - p.protected_halfwidth &&
                          b.min.y < c.y + p.protected_halfwidth && b.max.y > c.y - p.protected_halfwidth;
    CHECK_FALSE(overlaps);
    CHECK(b.min.z == 0.0);
    CHECK(b.max.z <= 10.0);
    CHECK(b.min.x >= 0.0);
    CHECK(b.max.y <= 64.0);
  }
}

TEST_CASE("generate_world without buildings") {
  WorldGenParams p;
  p.n_buildings = 0;
  const VoxelWorld w = generate_world(p);
  CHECK(w.boxes.empty());
  const DistanceField f = build_distance_field(w);
  const PlannerConfig cfg;
  CHECK(state_valid(Vec3{32, 32, 5}, f, cfg));
  CHECK(state_valid(Vec3{5, 50, 3}, f, cfg));
}

TEST_CASE("generate_world reports impossible placement") {
  WorldGenParams p;
  p.size_x = 12;
  p.size_y = 12;
  p.protected_halfwidth = 5.5;
  p.footprint_min = 9;
  CHECK_THROWS_AS(generate_world(p), GenerationError);
}

TEST_CASE("world file round trip") {
  WorldGenParams p;
  p.seed = 3;
  const VoxelWorld w = generate_world(p);
  std::stringstream ss;
  write_world(w, ss);
  const VoxelWorld back = read_world(ss);
  CHECK(back == w);
}

TEST_CASE("hand-written world file") {
  std::istringstream in(
      "MRESWORLD 1\n"
      "dims 40 40 40\n"
      "cell 0.25\n"
      "origin 0 0 0\n"
      "alt 0 10\n"
      "box 1 1 0 2 3 4\n"
      "box 5.5 6 0 7 8 9.75\n");
  const VoxelWorld w = read_world(in);
  REQUIRE(w.boxes.size() == 2);
  CHECK(w.boxes[0] == Box{{1, 1, 0}, {2, 3, 4}});
  CHECK(w.boxes[1] == Box{{5.5, 6, 0}, {7, 8, 9.75}});
  CHECK(w.extent() == Vec3{10, 10, 10});
}

TEST_CASE("world parse errors") {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_world(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("dims 4 4 4\n") == 1);
  CHECK(line_of("MRESWORLD 2\n") == 1);
  CHECK(line_of("MRESWORLD 1\ndims 40 40 40\ncell 0.25\norigin 0 0 0\nalt 0 10\nbox 1 1 0 2 3 40\n") == 6);
}

TEST_CASE("distance field values") {
  SUBCASE("center of an empty box world") {
    const VoxelWorld w = make_empty_world(10, 10, 10, 0.25);
    const DistanceField f = build_distance_field(w);
    CHECK(std::abs(f.distance(Vec3{5, 5, 5}) - 5.0) <= 0.25);
  }
  SUBCASE("inside and near a box") {
    const VoxelWorld w = one_box_world();
    const DistanceField f = build_distance_field(w);
    CHECK(f.distance(Vec3{10, 10, 5}) == 0.0);
    CHECK(std::abs(f.distance(Vec3{6, 10, 5}) - 2.0) <= 0.125 + 1e-9);
    CHECK(f.distance(Vec3{-1, 10, 5}) == 0.0);
  }
}

TEST_CASE("distance field matches brute force") {
  VoxelWorld w = make_empty_world(6, 5, 4, 0.5);
  w.boxes.push_back(Box{{1, 1, 0}, {2.5, 2, 2}});
  w.boxes.push_back(Box{{4, 3, 1}, {5, 4.5, 4}});
  const DistanceField f = build_distance_field(w);
  std::vector<std::array<int, 3>> obstacles;
  const auto d = f.dims();
  for (int k = -1; k <= d[2]; ++k) {
    for (int j = -1; j <= d[1]; ++j) {
      for (int i = -1; i <= d[0]; ++i) {
        const bool shell = i < 0 || j < 0 || k < 0 || i == d[0] || j == d[1] || k == d[2];
        if (shell || f.occupied(i, j, k)) obstacles.push_back({i, j, k});
      }
    }
  }
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i) {
        double best = 1e300;
        for (const auto& o : obstacles) {
          const double dx = i - o[0], dy = j - o[1], dz = k - o[2];
          best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz) * w.cell_size);
        }
        CHECK(f.at(i, j, k) == doctest::Approx(best).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("state_valid") {
  const VoxelWorld w = one_box_world();
  const DistanceField f = build_distance_field(w);
  const PlannerConfig cfg;
  CHECK(state_valid(Vec3{5.875, 10.125, 5.125}, f, cfg));
  CHECK_FALSE(state_valid(Vec3{7.125, 10.125, 5.125}, f, cfg));
  CHECK_FALSE(state_valid(Vec3{5, 5, -0.5}, f, cfg));
  CHECK_FALSE(state_valid(Vec3{25, 5, 5}, f, cfg));
}

TEST_CASE("primitive_collision_free") {
  const VoxelWorld w = one_box_world();
  const DistanceField f = build_distance_field(w);
  const PlannerConfig cfg;

  CHECK(primitive_collision_free(MotionPrimitive{State{{4, 4, 5}, {}}, Vec3{}, 0.5}, f, cfg));
  // Ends 1 m from the box face.
  CHECK_FALSE(primitive_collision_free(MotionPrimitive{State{{5, 10, 5}, {4, 0, 0}}, Vec3{-2, 0, 0}, 0.5}, f, cfg));
  // Valid endpoints on both sides, box in between.
  const MotionPrimitive through{State{{4, 10, 5}, {8, 0, 0}}, Vec3{}, 1.5};
  CHECK(state_valid(through.start.position, f, cfg));
  CHECK(state_valid(primitive_end(through).position, f, cfg));
  PlannerConfig fast = cfg;
  fast.v_max = 8.0;
  CHECK_FALSE(primitive_collision_free(through, f, fast));
  // Limits.
  CHECK_FALSE(primitive_collision_free(MotionPrimitive{State{{4, 4, 5}, {}}, Vec3{2.5, 0, 0}, 0.5}, f, cfg));
  CHECK_FALSE(primitive_collision_free(MotionPrimitive{State{{4, 4, 5}, {3.5, 0, 0}}, Vec3{2, 0, 0}, 0.5}, f, cfg));
}

TEST_CASE("primitive_collision_free agrees with dense sampling") {
  WorldGenParams p;
  p.seed = 11;
  const VoxelWorld w = generate_world(p);
  const DistanceField f = build_distance_field(w);
  const PlannerConfig cfg;
  std::uint64_t s = 12345;
  auto next = [&s]() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(s >> 11) * 0x1.0p-53;
  };
  int disagreements = 0;
  int free_count = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const Vec3 p0{2 + 60 * next(), 2 + 60 * next(), 0.5 + 9 * next()};
    const Vec3 v0{-4 + 8 * next(), -4 + 8 * next(), -4 + 8 * next()};
    const Vec3 u{-2 + 4 * next(), -2 + 4 * next(), -2 + 4 * next()};
    const double tau = next() < 0.5 ? 0.5 : 1.0;
    const MotionPrimitive prim{State{p0, v0}, u, tau};
    const State end = primitive_end(prim);
    if (end.velocity.maxAbs() > cfg.v_max) continue;
    // Dense reference with the same spacing rule.
    const double speed = std::max(v0.norm(), end.velocity.norm());
    const long n = std::max(1L, static_cast<long>(std::ceil(speed * tau / (0.5 * w.cell_size))));
    bool ref = true;
    for (long k = 0; k <= n && ref; ++k) {
      ref = state_valid(evaluate_primitive(prim, tau * static_cast<double>(k) / static_cast<double>(n)).position, f,
                        cfg);
    }
    const bool got = primitive_collision_free(prim, f, cfg);
    free_count += got ? 1 : 0;
    // The free-space shortcut may only accept what the dense check accepts.
    if (got != ref) ++disagreements;
  }
  CHECK(disagreements == 0);
  CHECK(free_count > 100);
}

TEST_CASE("accepted primitives keep geometric clearance") {
  WorldGenParams p;
  p.seed = 5;
  const VoxelWorld w = generate_world(p);
  const DistanceField f = build_distance_field(w);
  const PlannerConfig cfg;
  std::uint64_t s = 99;
  auto next = [&s]() {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(s >> 11) * 0x1.0p-53;
  };
  int accepted = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const MotionPrimitive prim{State{{2 + 60 * next(), 2 + 60 * next(), 1 + 8 * next()},
                                     {-3 + 6 * next(), -3 + 6 * next(), -1 + 2 * next()}},
                               Vec3{-2 + 4 * next(), -2 + 4 * next(), -2 + 4 * next()}, 0.5};
    if (!primitive_collision_free(prim, f, cfg)) continue;
    ++accepted;
    CHECK(oracle::check_trajectory({prim}, w, cfg, 0.3) == "");
  }
  CHECK(accepted > 100);
}
