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

#include "mres/core.hpp"

#include <sstream>

namespace mres {

const char* to_string(LatticeMode mode) {
  switch (mode) {
    case LatticeMode::Uniform:
      return "uniform";
    case LatticeMode::MResFixed:
      return "mres-fixed";
    case LatticeMode::MResVariable:
      return "mres-var";
  }
  return "?";
}

LatticeMode lattice_mode_from_string(const std::string& name) {
  if (name == "uniform") return LatticeMode::Uniform;
  if (name == "mres-fixed") return LatticeMode::MResFixed;
  if (name == "mres-var") return LatticeMode::MResVariable;
  throw InputError("unknown lattice mode '" + name + "'");
}

std::vector<std::string> PlannerConfig::violations() const {
  std::vector<std::string> out;
  auto check = [&out](bool ok, const char* what) {
    if (!ok) out.emplace_back(what);
  };
  check(std::isfinite(rho) && rho > 0.0, "rho must be > 0");
  check(std::isfinite(tau1) && tau1 > 0.0, "tau1 must be > 0");
  check(std::isfinite(v_max) && v_max > 0.0, "v_max must be > 0");
  check(std::isfinite(u_max) && u_max > 0.0, "u_max must be > 0");
  check(std::isfinite(du) && du > 0.0 && du <= u_max, "du must satisfy 0 < du <= u_max");
  if (std::isfinite(du) && du > 0.0 && std::isfinite(u_max)) {
    const double ratio = u_max / du;
    check(std::abs(ratio - std::round(ratio)) < 1e-9, "u_max / du must be an integer");
  }
  check(num_levels >= 1 && num_levels <= kMaxLevels, "num_levels must be in [1, 4]");
  check(level1_halfwidth_cells >= 1, "level1_halfwidth_cells must be >= 1");
  check(std::isfinite(clearance) && clearance >= 0.0, "clearance must be >= 0");
  check(expansion_limit >= 1, "expansion_limit must be >= 1");
  check(std::isfinite(replan_horizon) && replan_horizon > 0.0, "replan_horizon must be > 0");
  return out;
}

void PlannerConfig::validate() const {
  auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid planner config:";
  for (const auto& s : v) os << "\n  - " << s;
  throw InputError(os.str());
}

int PlannerConfig::command_steps() const { return static_cast<int>(std::lround(u_max / du)); }

std::vector<double> PlannerConfig::axis_commands() const {
  const int c = command_steps();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * c + 1));
  for (int i = -c; i <= c; ++i) out.push_back(i * du);
  return out;
}

State evaluate_primitive(const MotionPrimitive& prim, double t) {
  if (!(t >= 0.0 && t <= prim.duration)) {
    throw DomainError("evaluate_primitive: t=" + std::to_string(t) + " outside [0, " +
                      std::to_string(prim.duration) + "]");
  }
  const auto& s = prim.start;
  return State{s.position + t * s.velocity + (0.5 * t * t) * prim.accel, s.velocity + t * prim.accel};
}

State primitive_end(const MotionPrimitive& prim) {
  const double t = prim.duration;
  const auto& s = prim.start;
  return State{s.position + t * s.velocity + (0.5 * t * t) * prim.accel, s.velocity + t * prim.accel};
}

double primitive_cost(const Vec3& accel, double duration, double rho) {
  return accel.squaredNorm() * duration + rho * duration;
}

Resolutions derive_resolutions(const PlannerConfig& cfg) {
  cfg.validate();
  Resolutions r;
  r.num_levels = cfg.num_levels;
  const double u_min = cfg.du;
  const double dp1 = 0.5 * cfg.tau1 * cfg.tau1 * u_min;
  const double dv1 = cfg.tau1 * u_min;
  for (int i = 0; i < kMaxLevels; ++i) {
    const double scale = static_cast<double>(1 << i);
    r.dp[static_cast<std::size_t>(i)] = scale * dp1;
    r.tau[static_cast<std::size_t>(i)] = scale * cfg.tau1;
    r.dv[static_cast<std::size_t>(i)] = i < 2 ? dv1 : 2.0 * dv1;
  }
  return r;
}

LatticeKey quantize_state(const State& s, int level, const Resolutions& res, const Vec3& origin) {
  LatticeKey k;
  k.level = level;
  const double dp = res.dp_at(level);
  const double dv = res.dv_at(level);
  for (int a = 0; a < 3; ++a) {
    k.p[static_cast<std::size_t>(a)] = round_to_int((s.position[a] - origin[a]) / dp);
    k.v[static_cast<std::size_t>(a)] = round_to_int(s.velocity[a] / dv);
  }
  return k;
}

State dequantize_key(const LatticeKey& key, const Resolutions& res, const Vec3& origin) {
  State s;
  const double dp = res.dp_at(key.level);
  const double dv = res.dv_at(key.level);
  for (int a = 0; a < 3; ++a) {
    s.position[a] = origin[a] + key.p[static_cast<std::size_t>(a)] * dp;
    s.velocity[a] = key.v[static_cast<std::size_t>(a)] * dv;
  }
  return s;
}

}  // namespace mres
