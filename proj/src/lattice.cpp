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

#include "mres/lattice.hpp"

namespace mres {

namespace {

constexpr double kTol = 1e-9;

// Removes floating noise from velocities that should sit on a fine dyadic grid.
double canonical(double v, double dv1) {
  const double q = dv1 / 1024.0;
  const double r = round_half_away(v / q) * q;
  return std::abs(r - v) < kTol ? r : v;
}

bool velocity_on_grid(const Vec3& v, double dv) {
  return is_multiple(v.x, dv) && is_multiple(v.y, dv) && is_multiple(v.z, dv);
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

// Builds the grid-adjusted edge for a nominal command, or nothing when the
// adjusted command, the end velocity or the swept volume is infeasible.
std::optional<Successor> make_edge(const LatticeState& s, const Vec3& command, double duration,
                                   const MultiresGrid& grid, const PlannerConfig& cfg, const DistanceField& field) {
  const auto& res = grid.res;
  const State raw = primitive_end(MotionPrimitive{s.state, command, duration});

  Vec3 aim = raw.position;
  if (s.velocity_offgrid) {
    // Aim for the position that a primitive ending at the nearest quantized
    // velocity would reach; snapping then keeps the velocity error below dv1 / 2.
    const double dv = res.dv_at(grid.level_of(raw.position));
    Vec3 target_v;
    for (int a = 0; a < 3; ++a) target_v[a] = round_half_away(raw.velocity[a] / dv) * dv;
    aim = s.state.position + (0.5 * duration) * (s.state.velocity + target_v);
  }

  // Snap onto the coarser of the start and end grids so that the velocity
  // change stays a multiple of the Level-1 velocity resolution.
  int level = std::max(s.level, grid.level_of(aim));
  Vec3 target = grid.snap(aim, level);
  for (int i = 0; i < kMaxLevels; ++i) {
    const int l = grid.level_of(target);
    if (l <= level) break;
    level = l;
    target = grid.snap(aim, level);
  }

  const Vec3 u = adjust_primitive(s.state, duration, target);
  if (u.maxAbs() > cfg.u_max + kTol) return std::nullopt;
  const double dv1 = res.dv[0];
  Vec3 v_end = s.state.velocity + duration * u;
  for (int a = 0; a < 3; ++a) v_end[a] = canonical(v_end[a], dv1);
  if (v_end.maxAbs() > cfg.v_max + kTol) return std::nullopt;

  Successor out;
  out.primitive = MotionPrimitive{s.state, u, duration};
  if (!primitive_collision_free(out.primitive, field, cfg)) return std::nullopt;
  out.end.state = State{target, v_end};
  out.end.level = grid.level_of(target);
  out.end.key = quantize_state(out.end.state, out.end.level, res, grid.origin);
  out.end.velocity_offgrid = !velocity_on_grid(v_end, res.dv_at(out.end.level));
  out.cost = primitive_cost(u, duration, cfg.rho);
  return out;
}

void add_unique(std::vector<Successor>& out, Successor&& s) {
  for (auto& existing : out) {
    if (existing.end.key == s.end.key) {
      if (s.cost < existing.cost) existing = std::move(s);
      return;
    }
  }
  out.push_back(std::move(s));
}

}  // namespace

int MultiresGrid::level_of(const Vec3& p) const {
  const double cheb = (p - origin).maxAbs();
  for (int i = 1; i < num_levels; ++i) {
    if (cheb <= halfwidth[static_cast<std::size_t>(i - 1)] + kTol) return i;
  }
  return num_levels;
}

Vec3 MultiresGrid::snap(const Vec3& p, int level) const {
  const double dp = res.dp_at(level);
  Vec3 out;
  for (int a = 0; a < 3; ++a) out[a] = origin[a] + round_half_away((p[a] - origin[a]) / dp) * dp;
  return out;
}

bool MultiresGrid::on_grid(const Vec3& p, int level, double tol) const {
  const double dp = res.dp_at(level);
  for (int a = 0; a < 3; ++a) {
    if (!is_multiple(p[a] - origin[a], dp, tol)) return false;
  }
  return true;
}

MultiresGrid make_grid(const Vec3& origin, const PlannerConfig& cfg, LatticeMode mode) {
  MultiresGrid g;
  g.origin = origin;
  g.res = derive_resolutions(cfg);
  g.num_levels = mode == LatticeMode::Uniform ? 1 : cfg.num_levels;
  g.res.num_levels = g.num_levels;
  const double base = cfg.level1_halfwidth_cells * g.res.dp[0];
  for (int i = 0; i < kMaxLevels; ++i) g.halfwidth[static_cast<std::size_t>(i)] = base * static_cast<double>(1 << i);
  return g;
}

LatticeState make_lattice_state(const State& s, const MultiresGrid& grid) {
  LatticeState ls;
  ls.state = s;
  ls.level = grid.level_of(s.position);
  ls.key = quantize_state(s, ls.level, grid.res, grid.origin);
  ls.velocity_offgrid =
      !grid.on_grid(s.position, ls.level) || !velocity_on_grid(s.velocity, grid.res.dv_at(ls.level));
  return ls;
}

LatticeState make_goal_state(const Vec3& goal, const MultiresGrid& grid) {
  LatticeState ls;
  ls.state = State{goal, Vec3{}};
  ls.level = grid.level_of(goal);
  ls.key = quantize_state(ls.state, ls.level, grid.res, grid.origin);
  ls.key.level = 0;
  ls.velocity_offgrid = false;
  return ls;
}

double adjust_axis(double p, double v, double duration, double target) {
  return 2.0 * (target - p - duration * v) / (duration * duration);
}

Vec3 adjust_primitive(const State& start, double duration, const Vec3& target_position) {
  Vec3 u;
  for (int a = 0; a < 3; ++a) {
    u[a] = adjust_axis(start.position[a], start.velocity[a], duration, target_position[a]);
  }
  return u;
}

double variable_duration(double v, double u, int level, const Resolutions& res) {
  const double tau1 = res.tau[0];
  const double dp = res.dp_at(level);
  double tau = tau1;
  for (int k = 0; k <= 6; ++k, tau *= 2.0) {
    if (std::abs(tau * v + 0.5 * tau * tau * u) >= dp - 1e-12) return tau;
  }
  return tau1;
}

std::vector<double> level_axis_commands(int level, const PlannerConfig& cfg) {
  const double scale = level == 1 ? 1.0 : (level <= 3 ? 0.5 : 0.25);
  auto cmds = cfg.axis_commands();
  for (auto& c : cmds) c *= scale;
  return cmds;
}

std::array<Vec3, 2> special_action_commands(const State& s, int level, const Resolutions& res,
                                            const PlannerConfig& cfg) {
  const double tau = res.tau_at(level);
  Vec3 stop;
  Vec3 speed_up;
  for (int a = 0; a < 3; ++a) {
    const double v = s.velocity[a];
    stop[a] = std::clamp(-v / tau, -cfg.u_max, cfg.u_max);
    speed_up[a] = std::clamp((sign(v) * cfg.v_max - v) / tau, -cfg.u_max, cfg.u_max);
  }
  return {stop, speed_up};
}

std::vector<Successor> special_actions(const LatticeState& s, const MultiresGrid& grid, const PlannerConfig& cfg,
                                       const DistanceField& field) {
  std::vector<Successor> out;
  const double tau = grid.res.tau_at(s.level);
  for (const Vec3& cmd : special_action_commands(s.state, s.level, grid.res, cfg)) {
    if (auto e = make_edge(s, cmd, tau, grid, cfg, field)) out.push_back(std::move(*e));
  }
  return out;
}

void successors(const LatticeState& s, LatticeMode mode, const MultiresGrid& grid, const PlannerConfig& cfg,
                const DistanceField& field, std::vector<Successor>& out) {
  out.clear();
  const auto& res = grid.res;
  const int level = mode == LatticeMode::Uniform ? 1 : s.level;
  const auto cmds = mode == LatticeMode::MResFixed ? level_axis_commands(level, cfg) : cfg.axis_commands();
  const double fixed_tau = mode == LatticeMode::MResFixed ? res.tau_at(level) : res.tau[0];
  const auto& v = s.state.velocity;

  for (double ux : cmds) {
    for (double uy : cmds) {
      for (double uz : cmds) {
        double tau = fixed_tau;
        if (mode == LatticeMode::MResVariable) {
          tau = std::max({variable_duration(v.x, ux, level, res), variable_duration(v.y, uy, level, res),
                          variable_duration(v.z, uz, level, res)});
        }
        if (auto e = make_edge(s, Vec3{ux, uy, uz}, tau, grid, cfg, field)) add_unique(out, std::move(*e));
      }
    }
  }
  if (mode == LatticeMode::MResFixed) {
    for (auto& e : special_actions(s, grid, cfg, field)) add_unique(out, std::move(e));
  }
}

std::vector<Successor> successors(const LatticeState& s, LatticeMode mode, const MultiresGrid& grid,
                                  const PlannerConfig& cfg, const DistanceField& field) {
  std::vector<Successor> out;
  successors(s, mode, grid, cfg, field, out);
  return out;
}

std::optional<Successor> goal_actions(const LatticeState& s, const Vec3& goal, const Heuristic1DTable& table,
                                      const MultiresGrid& grid, const PlannerConfig& cfg, const DistanceField& field) {
  const double horizon = grid.res.tau[0] * static_cast<double>(1 << (s.level - 1));
  const auto& p = s.state.position;
  const auto& v = s.state.velocity;

  std::array<std::vector<int>, 3> seqs;
  std::size_t steps = 0;
  for (int a = 0; a < 3; ++a) {
    const double drift = p[a] + v[a] * horizon;
    const double reach = 0.5 * cfg.u_max * horizon * horizon;
    if (goal[a] < drift - reach - kTol || goal[a] > drift + reach + kTol) return std::nullopt;

    const double dcells = (goal[a] - p[a]) / table.dp1();
    const double ncells = v[a] / table.dv1();
    const int d = round_to_int(dcells);
    const int n = round_to_int(ncells);
    if (std::abs(dcells - d) > 1e-6 || std::abs(ncells - n) > 1e-6) return std::nullopt;
    if (!table.contains(d, n) || !std::isfinite(table.cost(d, n))) return std::nullopt;
    if (table.time(d, n) > horizon + kTol) return std::nullopt;
    seqs[static_cast<std::size_t>(a)] = table.command_sequence(d, n);
    steps = std::max(steps, seqs[static_cast<std::size_t>(a)].size());
  }

  Successor out;
  out.goal_action = true;
  out.end = make_goal_state(goal, grid);
  out.sequence.reserve(steps);
  State cur = s.state;
  const double tau1 = table.tau1();
  for (std::size_t k = 0; k < steps; ++k) {
    Vec3 u;
    for (int a = 0; a < 3; ++a) {
      const auto& seq = seqs[static_cast<std::size_t>(a)];
      u[a] = k < seq.size() ? seq[k] * table.du() : 0.0;
    }
    MotionPrimitive prim{cur, u, tau1};
    if (!primitive_collision_free(prim, field, cfg)) return std::nullopt;
    out.cost += primitive_cost(u, tau1, cfg.rho);
    out.sequence.push_back(prim);
    cur = primitive_end(prim);
  }
  if ((cur.position - goal).maxAbs() > 1e-6 || cur.velocity.maxAbs() > 1e-6) {
    throw InternalError("goal action does not end at the goal");
  }
  return out;
}

}  // namespace mres
