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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mres {

constexpr int kMaxLevels = 4;

// Error types. Everything the library throws derives from Error so callers
// (the CLI in particular) can map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invalid start state, malformed config, unknown flag.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Text file could not be parsed; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Broken invariant inside the planner (corrupted parent chain, replay mismatch).
class InternalError : public Error {
 public:
  using Error::Error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  double squaredNorm() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(squaredNorm()); }
  double maxAbs() const { return std::max({std::abs(x), std::abs(y), std::abs(z)}); }
  bool allFinite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct State {
  Vec3 position;  // m
  Vec3 velocity;  // m/s

  friend bool operator==(const State&, const State&) = default;
};

/// Constant-acceleration segment starting at `start`.
struct MotionPrimitive {
  State start;
  Vec3 accel;             // m/s^2
  double duration = 0.0;  // s
};

enum class LatticeMode { Uniform, MResFixed, MResVariable };

const char* to_string(LatticeMode mode);
LatticeMode lattice_mode_from_string(const std::string& name);

struct PlannerConfig {
  double rho = 16.0;
  double tau1 = 0.5;
  double v_max = 4.0;
  double u_max = 2.0;
  double du = 2.0;
  int num_levels = 4;
  int level1_halfwidth_cells = 16;
  double clearance = 1.5;
  std::int64_t expansion_limit = 3'000'000;
  double replan_horizon = 1.0;

  /// Human-readable list of violated constraints; empty when valid.
  std::vector<std::string> violations() const;
  /// Throws InputError listing every violation.
  void validate() const;

  /// Integer command multiples per axis: {-C, ..., 0, ..., C} with C = u_max / du.
  int command_steps() const;
  /// Level-1 per-axis command set in m/s^2, ascending.
  std::vector<double> axis_commands() const;
};

/// Per-level resolutions, index 0 is Level-1.
struct Resolutions {
  int num_levels = 0;
  std::array<double, kMaxLevels> dp{};   // m
  std::array<double, kMaxLevels> dv{};   // m/s
  std::array<double, kMaxLevels> tau{};  // s, fixed-step scheme

  double dp_at(int level) const { return dp[static_cast<std::size_t>(level - 1)]; }
  double dv_at(int level) const { return dv[static_cast<std::size_t>(level - 1)]; }
  double tau_at(int level) const { return tau[static_cast<std::size_t>(level - 1)]; }
};

/// Integer lattice coordinates of a state at one resolution level.
/// Level 0 is reserved for the goal node of a search.
struct LatticeKey {
  std::int32_t level = 0;
  std::array<std::int32_t, 3> p{};
  std::array<std::int32_t, 3> v{};

  friend bool operator==(const LatticeKey& a, const LatticeKey& b) {
    return a.p[0] == b.p[0] && a.p[1] == b.p[1] && a.p[2] == b.p[2] && a.v[0] == b.v[0] && a.v[1] == b.v[1] &&
           a.v[2] == b.v[2] && a.level == b.level;
  }
};

struct LatticeKeyHash {
  std::size_t operator()(const LatticeKey& k) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(k.level);
    auto mix = [&h](std::int32_t v) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    };
    for (auto c : k.p) mix(c);
    for (auto c : k.v) mix(c);
    return static_cast<std::size_t>(h);
  }
};

/// Closed-form state along the primitive; throws DomainError for t outside [0, duration].
State evaluate_primitive(const MotionPrimitive& prim, double t);

/// Endpoint of the primitive without the domain check.
State primitive_end(const MotionPrimitive& prim);

/// Squared control effort times duration plus the time penalty.
double primitive_cost(const Vec3& accel, double duration, double rho);

Resolutions derive_resolutions(const PlannerConfig& cfg);

/// std::round without the library call for moderate magnitudes.
inline double round_half_away(double x) {
  if (!(std::abs(x) < 4.0e15)) return std::round(x);
  const double t = static_cast<double>(static_cast<std::int64_t>(x));
  const double r = x - t;
  if (r >= 0.5) return t + 1.0;
  if (r <= -0.5) return t - 1.0;
  return t;
}

/// Round half away from zero.
inline std::int32_t round_to_int(double x) { return static_cast<std::int32_t>(round_half_away(x)); }

LatticeKey quantize_state(const State& s, int level, const Resolutions& res, const Vec3& origin);
State dequantize_key(const LatticeKey& key, const Resolutions& res, const Vec3& origin);

/// True when x is an integer multiple of step within tol.
inline bool is_multiple(double x, double step, double tol = 1e-9) {
  return std::abs(x - round_half_away(x / step) * step) <= tol;
}

}  // namespace mres
