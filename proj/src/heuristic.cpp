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

#include "mres/heuristic.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <queue>
#include <tuple>

namespace mres {

namespace {

constexpr char kTableMagic[8] = {'M', 'R', 'E', 'S', 'H', '1', 'D', '\n'};
constexpr std::uint32_t kTableVersion = 1;
constexpr double kTieTol = 1e-12;

std::uint64_t fnv1a(std::uint64_t h, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xFFu;
    h *= 0x100000001B3ull;
  }
  return h;
}

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InputError("heuristic table file truncated");
  return v;
}

}  // namespace

std::uint64_t Heuristic1DTable::cache_key_for(const PlannerConfig& cfg, double max_distance) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (double v : {cfg.rho, cfg.tau1, cfg.du, cfg.u_max, cfg.v_max, max_distance}) h = fnv1a(h, v);
  return h;
}

Heuristic1DTable Heuristic1DTable::build(const PlannerConfig& cfg, double max_distance, std::int64_t entry_cap) {
  cfg.validate();
  if (!(max_distance > 0.0) || !std::isfinite(max_distance)) throw InputError("table: max distance must be > 0");

  Heuristic1DTable t;
  t.rho_ = cfg.rho;
  t.tau1_ = cfg.tau1;
  t.du_ = cfg.du;
  t.u_max_ = cfg.u_max;
  t.v_max_ = cfg.v_max;
  t.max_distance_ = max_distance;
  t.c_steps_ = cfg.command_steps();
  if (t.c_steps_ > 127) throw TableBuildError("table: more than 127 command steps per axis");
  t.v_cells_ = static_cast<int>(std::floor(cfg.v_max / t.dv1() + 1e-9));
  t.d_exposed_ = static_cast<int>(std::ceil(max_distance / t.dp1() - 1e-9));

  // Optimal paths may overshoot the target; a margin of twice the stopping
  // distance from full speed keeps every exposed entry exact.
  const int stop_cells = t.v_cells_ * t.v_cells_ + t.v_cells_;
  t.d_total_ = t.d_exposed_ + 2 * stop_cells + 2 * t.v_cells_ + 8;

  const std::int64_t entries = (2 * static_cast<std::int64_t>(t.d_total_) + 1) * (2 * t.v_cells_ + 1);
  if (entries > entry_cap) {
    throw TableBuildError("table: " + std::to_string(entries) + " entries exceed cap " + std::to_string(entry_cap));
  }
  t.cells_.assign(static_cast<std::size_t>(entries), Cell{});
  t.cache_key_ = cache_key_for(cfg, max_distance);

  using Item = std::tuple<double, double, int, int>;  // cost, time, d, n
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  auto& goal = t.raw(0, 0);
  goal.cost = goal.time = goal.effort = 0.0;
  open.emplace(0.0, 0.0, 0, 0);

  const int C = t.c_steps_;
  while (!open.empty()) {
    const auto [cost, time, d1, n1] = open.top();
    open.pop();
    const Cell settled = t.raw(d1, n1);
    if (cost != settled.cost || time != settled.time) continue;
    for (int c = -C; c <= C; ++c) {
      // Predecessor (d, n) reaches (d1, n1) by applying command c for tau1.
      const int n = n1 - c;
      if (std::abs(n) > t.v_cells_) continue;
      const int d = d1 + 2 * n + c;
      if (std::abs(d) > t.d_total_) continue;
      const double u = c * t.du_;
      const double step_effort = u * u * t.tau1_;
      const double nc = cost + step_effort + t.rho_ * t.tau1_;
      const double nt = time + t.tau1_;
      Cell& cur = t.raw(d, n);
      const bool better = nc < cur.cost - kTieTol || (std::abs(nc - cur.cost) <= kTieTol && nt < cur.time - kTieTol);
      if (!better) continue;
      cur.cost = nc;
      cur.time = nt;
      cur.effort = settled.effort + step_effort;
      cur.next = static_cast<std::int8_t>(c);
      open.emplace(nc, nt, d, n);
    }
  }
  return t;
}

const Heuristic1DTable::Cell& Heuristic1DTable::cell(int d, int n) const {
  if (!contains(d, n)) {
    throw LookupError("1D table lookup (" + std::to_string(d) + ", " + std::to_string(n) +
                      ") outside range +/-" + std::to_string(d_exposed_) + " x +/-" + std::to_string(v_cells_));
  }
  return raw(d, n);
}

std::vector<int> Heuristic1DTable::command_sequence(int d, int n) const {
  std::vector<int> seq;
  if (!std::isfinite(cell(d, n).cost)) return seq;
  while (d != 0 || n != 0) {
    const int c = raw(d, n).next;
    seq.push_back(c);
    d -= 2 * n + c;
    n += c;
    if (std::abs(d) > d_total_ || std::abs(n) > v_cells_ || seq.size() > cells_.size()) {
      throw InternalError("1D table: broken successor chain");
    }
  }
  return seq;
}

Heuristic1DEntry Heuristic1DTable::entry(int d, int n) const {
  const Cell& c = cell(d, n);
  Heuristic1DEntry e;
  e.cost = c.cost;
  e.time = c.time;
  e.effort = c.effort;
  for (int step : command_sequence(d, n)) e.sequence.emplace_back(step * du_, tau1_);
  return e;
}

void Heuristic1DTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write heuristic table '" + path + "'");
  out.write(kTableMagic, sizeof(kTableMagic));
  put(out, kTableVersion);
  put(out, cache_key_);
  for (double v : {rho_, tau1_, du_, u_max_, v_max_, max_distance_}) put(out, v);
  for (std::int32_t v : {d_exposed_, d_total_, v_cells_, c_steps_}) put(out, v);
  for (const Cell& c : cells_) {
    put(out, c.cost);
    put(out, c.time);
    put(out, c.effort);
    put(out, c.next);
  }
  if (!out) throw InputError("failed writing heuristic table '" + path + "'");
}

Heuristic1DTable Heuristic1DTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open heuristic table '" + path + "'");
  char magic[sizeof(kTableMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kTableMagic, sizeof(magic)) != 0) throw InputError("not a heuristic table file");
  if (get<std::uint32_t>(in) != kTableVersion) throw InputError("unsupported heuristic table version");
  Heuristic1DTable t;
  t.cache_key_ = get<std::uint64_t>(in);
  t.rho_ = get<double>(in);
  t.tau1_ = get<double>(in);
  t.du_ = get<double>(in);
  t.u_max_ = get<double>(in);
  t.v_max_ = get<double>(in);
  t.max_distance_ = get<double>(in);
  t.d_exposed_ = get<std::int32_t>(in);
  t.d_total_ = get<std::int32_t>(in);
  t.v_cells_ = get<std::int32_t>(in);
  t.c_steps_ = get<std::int32_t>(in);
  if (t.d_exposed_ < 0 || t.d_total_ < t.d_exposed_ || t.v_cells_ < 0 || t.d_total_ > 100'000'000 ||
      t.v_cells_ > 1'000'000) {
    throw InputError("corrupt heuristic table header");
  }
  const std::size_t n = static_cast<std::size_t>(2 * t.d_total_ + 1) * static_cast<std::size_t>(2 * t.v_cells_ + 1);
  t.cells_.resize(n);
  for (Cell& c : t.cells_) {
    c.cost = get<double>(in);
    c.time = get<double>(in);
    c.effort = get<double>(in);
    c.next = get<std::int8_t>(in);
  }
  return t;
}

Heuristic1DTable build_1d_table(const PlannerConfig& cfg, double max_distance) {
  return Heuristic1DTable::build(cfg, max_distance);
}

Heuristic1DTable load_or_build_table(const PlannerConfig& cfg, double max_distance, const std::string& cache_path) {
  if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
    try {
      auto t = Heuristic1DTable::load(cache_path);
      if (t.cache_key() == Heuristic1DTable::cache_key_for(cfg, max_distance)) return t;
    } catch (const InputError&) {
      // Stale or corrupt cache; rebuild below.
    }
  }
  auto t = Heuristic1DTable::build(cfg, max_distance);
  if (!cache_path.empty()) t.save(cache_path);
  return t;
}

double axis_control_bound(double distance, double velocity, const PlannerConfig& cfg) {
  constexpr double kEps = 1e-9;
  const bool at_goal = std::abs(distance) <= kEps;
  const bool at_rest = std::abs(velocity) <= kEps;
  if (at_goal && at_rest) return 0.0;
  const double bump = 2.0 * cfg.du * cfg.du * cfg.tau1;
  if (at_rest) return bump;
  // |v| / (u_max tau1) full-deceleration steps, each costing u_max^2 tau1.
  const double stop = std::abs(velocity) * cfg.u_max;
  if (!at_goal && velocity * distance > 0.0) return stop;
  // Moving away, or sitting on the goal coordinate with nonzero speed: stop, then return.
  return stop + bump;
}

double axis_min_time(double distance, double velocity, double u_max, double v_max) {
  double d = distance;
  double v = velocity;
  if (d < 0.0) {
    d = -d;
    v = -v;
  }
  const double a = u_max;
  v = std::clamp(v, -v_max, v_max);

  auto rest_to_rest = [a, v_max](double dist) {
    if (dist <= 0.0) return 0.0;
    const double peak = std::sqrt(a * dist);
    if (peak <= v_max) return 2.0 * peak / a;
    return 2.0 * v_max / a + (dist - v_max * v_max / a) / v_max;
  };

  if (v < 0.0) {
    // Brake to rest first; the goal is then farther away.
    return -v / a + rest_to_rest(d + v * v / (2.0 * a));
  }
  const double stop_dist = v * v / (2.0 * a);
  if (stop_dist > d) {
    return v / a + rest_to_rest(stop_dist - d);
  }
  const double peak = std::sqrt(a * d + 0.5 * v * v);
  if (peak <= v_max) return (peak - v) / a + peak / a;
  const double cruise = d - (v_max * v_max - v * v) / (2.0 * a) - v_max * v_max / (2.0 * a);
  return (v_max - v) / a + v_max / a + cruise / v_max;
}

double h_1d(const State& s, const Vec3& goal, const Heuristic1DTable& table, const PlannerConfig& cfg) {
  double times[3];
  double efforts[3];
  double dist[3];
  for (int a = 0; a < 3; ++a) {
    dist[a] = goal[a] - s.position[a];
    const int d = round_to_int(dist[a] / table.dp1());
    const int n = round_to_int(s.velocity[a] / table.dv1());
    const double c = table.cost(d, n);
    if (std::isfinite(c)) {
      times[a] = table.time(d, n);
      efforts[a] = table.effort(d, n);
    } else {
      // Parity-unreachable on the Level-1 lattice; fall back to the analytic bounds.
      times[a] = axis_min_time(dist[a], s.velocity[a], cfg.u_max, cfg.v_max);
      efforts[a] = axis_control_bound(dist[a], s.velocity[a], cfg);
    }
  }
  int slowest = 0;
  for (int a = 1; a < 3; ++a) {
    if (times[a] > times[slowest]) slowest = a;
  }
  double h = cfg.rho * times[slowest] + efforts[slowest];
  for (int a = 0; a < 3; ++a) {
    if (a != slowest) h += axis_control_bound(dist[a], s.velocity[a], cfg);
  }
  return h;
}

double h_time_bound(const State& s, const Vec3& goal, const PlannerConfig& cfg) {
  double t = 0.0;
  for (int a = 0; a < 3; ++a) {
    t = std::max(t, axis_min_time(goal[a] - s.position[a], s.velocity[a], cfg.u_max, cfg.v_max));
  }
  return cfg.rho * t;
}

}  // namespace mres
