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

#include "mres/search.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>
#include <unordered_map>

namespace mres {

const char* to_string(HeuristicKind h) {
  switch (h) {
    case HeuristicKind::OneD:
      return "h1d";
    case HeuristicKind::TimeBound:
      return "htime";
    case HeuristicKind::Zero:
      return "zero";
  }
  return "?";
}

const char* to_string(SearchScheme s) { return s == SearchScheme::AStar ? "astar" : "level"; }

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found:
      return "found";
    case SearchStatus::ExpansionLimit:
      return "expansion-limit";
    case SearchStatus::Exhausted:
      return "exhausted";
  }
  return "?";
}

HeuristicKind heuristic_from_string(const std::string& name) {
  if (name == "h1d") return HeuristicKind::OneD;
  if (name == "htime") return HeuristicKind::TimeBound;
  if (name == "zero") return HeuristicKind::Zero;
  throw InputError("unknown heuristic '" + name + "'");
}

SearchScheme scheme_from_string(const std::string& name) {
  if (name == "astar") return SearchScheme::AStar;
  if (name == "level") return SearchScheme::LevelAStar;
  throw InputError("unknown search scheme '" + name + "'");
}

double heuristic_value(HeuristicKind kind, const State& s, const Vec3& goal, const Heuristic1DTable& table,
                       const PlannerConfig& cfg) {
  switch (kind) {
    case HeuristicKind::OneD:
      return h_1d(s, goal, table, cfg);
    case HeuristicKind::TimeBound:
      return h_time_bound(s, goal, cfg);
    case HeuristicKind::Zero:
      return 0.0;
  }
  return 0.0;
}

void write_trace_csv(std::span<const TraceRow> trace, std::ostream& out) {
  out << "expansion_index,f,g,h,level\n";
  char buf[160];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof(buf), "%lld,%.6f,%.6f,%.6f,%d\n", static_cast<long long>(r.expansion), r.f, r.g, r.h,
                  r.level);
    out << buf;
  }
}

double trajectory_cost(std::span<const MotionPrimitive> trajectory, double rho) {
  double c = 0.0;
  for (const auto& p : trajectory) c += primitive_cost(p.accel, p.duration, rho);
  return c;
}

double trajectory_duration(std::span<const MotionPrimitive> trajectory) {
  double t = 0.0;
  for (const auto& p : trajectory) t += p.duration;
  return t;
}

State trajectory_state(std::span<const MotionPrimitive> trajectory, double t) {
  if (trajectory.empty()) throw DomainError("trajectory_state: empty trajectory");
  for (const auto& p : trajectory) {
    if (t <= p.duration) return evaluate_primitive(p, std::max(t, 0.0));
    t -= p.duration;
  }
  return primitive_end(trajectory.back());
}

std::vector<MotionPrimitive> reconstruct_trajectory(std::span<const SearchNode> nodes, std::int32_t goal_index,
                                                    const State& goal) {
  if (goal_index < 0 || static_cast<std::size_t>(goal_index) >= nodes.size()) {
    throw InternalError("reconstruct: goal index out of range");
  }
  std::vector<std::int32_t> chain;
  for (std::int32_t i = goal_index; i != -1; i = nodes[static_cast<std::size_t>(i)].parent) {
    if (i < 0 || static_cast<std::size_t>(i) >= nodes.size() || chain.size() > nodes.size()) {
      throw InternalError("reconstruct: broken parent chain");
    }
    chain.push_back(i);
  }

  std::vector<MotionPrimitive> out;
  for (auto it = chain.rbegin() + 1; it < chain.rend(); ++it) {
    const SearchNode& n = nodes[static_cast<std::size_t>(*it)];
    if (n.goal_action) {
      out.insert(out.end(), n.sequence.begin(), n.sequence.end());
    } else {
      const SearchNode& parent = nodes[static_cast<std::size_t>(n.parent)];
      out.push_back(MotionPrimitive{parent.lattice_state.state, n.accel, n.duration});
    }
  }

  State cur = nodes[static_cast<std::size_t>(chain.back())].lattice_state.state;
  for (const auto& p : out) cur = primitive_end(MotionPrimitive{cur, p.accel, p.duration});
  const double err = std::max((cur.position - goal.position).maxAbs(), (cur.velocity - goal.velocity).maxAbs());
  if (!(err <= 1e-6)) {
    throw InternalError("reconstruct: replayed trajectory misses the goal by " + std::to_string(err));
  }
  return out;
}

namespace {

constexpr double kImproveTol = 1e-12;

bool same_state(const State& a, const State& b, double tol = 1e-9) {
  return (a.position - b.position).maxAbs() <= tol && (a.velocity - b.velocity).maxAbs() <= tol;
}

struct OpenEntry {
  double f;
  double g;
  double h;
  std::uint64_t seq;
  std::int32_t node;
};

// Lowest f first; larger g, then earlier insertion, on ties.
struct OpenOrder {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.seq > b.seq;
  }
};

using OpenQueue = std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder>;

const SearchProblem& require_complete(const SearchProblem& p) {
  if (!p.grid || !p.cfg || !p.field || !p.table) throw InputError("search: incomplete problem");
  return p;
}

class Searcher {
 public:
  explicit Searcher(const SearchProblem& p)
      : p_(require_complete(p)), goal_(make_goal_state(p.goal.position, *p.grid)) {
    const auto& cfg = *p.cfg;
    if (!p.start.position.allFinite() || !p.start.velocity.allFinite()) throw InputError("search: non-finite start");
    if (!state_valid(p.start.position, *p.field, cfg)) throw InputError("search: start state is in collision");
    if (p.start.velocity.maxAbs() > cfg.v_max + 1e-9) throw InputError("search: start velocity exceeds v_max");
    if (p.goal.velocity.maxAbs() > 1e-9) throw InputError("search: goal velocity must be zero");
    if (!state_valid(p.goal.position, *p.field, cfg)) throw InputError("search: goal state is in collision");
    t0_ = std::chrono::steady_clock::now();
  }

  bool is_goal(std::int32_t i) const { return nodes_[static_cast<std::size_t>(i)].lattice_state.key.level == 0; }
  bool start_is_goal() const { return same_state(p_.start, goal_.state); }

  std::int32_t add_start() {
    SearchNode n;
    n.lattice_state = start_is_goal() ? goal_ : make_lattice_state(p_.start, *p_.grid);
    n.g = 0.0;
    n.f = heuristic(n.lattice_state);
    return insert(std::move(n));
  }

  double heuristic(const LatticeState& s) const {
    if (s.key.level == 0) return 0.0;
    return heuristic_value(p_.heuristic, s.state, goal_.state.position, *p_.table, *p_.cfg);
  }

  // Expands node i; calls on_push(child) for every child inserted or improved.
  // Stops early (returns the child) when on_push returns true.
  template <typename OnPush>
  std::int32_t expand(std::int32_t i, OnPush&& on_push) {
    const LatticeState from = nodes_[static_cast<std::size_t>(i)].lattice_state;
    const double g = nodes_[static_cast<std::size_t>(i)].g;
    successors(from, p_.mode, *p_.grid, *p_.cfg, *p_.field, buffer_);
    if (auto ga = goal_actions(from, goal_.state.position, *p_.table, *p_.grid, *p_.cfg, *p_.field)) {
      buffer_.push_back(std::move(*ga));
    }
    for (auto& s : buffer_) {
      if (!s.goal_action && same_state(s.end.state, goal_.state)) s.end = goal_;
      const std::int32_t child = relax(i, g, s);
      if (child >= 0 && on_push(child)) return child;
    }
    return -1;
  }

  SearchNode& node(std::int32_t i) { return nodes_[static_cast<std::size_t>(i)]; }

  void record(std::int32_t i) {
    ++stats_.expansions;
    if (p_.capture_trace) {
      const auto& n = node(i);
      stats_.trace.push_back(TraceRow{stats_.expansions - 1, n.f, n.g, n.h(), n.lattice_state.level});
    }
  }

  SearchResult finish(SearchStatus status, std::int32_t goal_index) {
    SearchResult r;
    r.status = status;
    if (status == SearchStatus::Found) {
      r.trajectory = reconstruct_trajectory(nodes_, goal_index, goal_.state);
      r.cost = node(goal_index).g;
    }
    stats_.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    r.stats = std::move(stats_);
    return r;
  }

  OpenEntry entry(std::int32_t i) {
    const auto& n = node(i);
    ++stats_.pushes;
    return OpenEntry{n.f, n.g, n.h(), seq_++, i};
  }

  bool stale(const OpenEntry& e) {
    const auto& n = node(e.node);
    return n.closed || e.g != n.g;
  }

  const SearchProblem& problem() const { return p_; }
  std::int64_t expansions() const { return stats_.expansions; }

 private:
  std::int32_t insert(SearchNode&& n) {
    const auto idx = static_cast<std::int32_t>(nodes_.size());
    index_.emplace(n.lattice_state.key, idx);
    nodes_.push_back(std::move(n));
    return idx;
  }

  std::int32_t relax(std::int32_t parent, double parent_g, Successor& s) {
    const double g = parent_g + s.cost;
    auto it = index_.find(s.end.key);
    std::int32_t idx;
    if (it == index_.end()) {
      SearchNode n;
      n.lattice_state = s.end;
      idx = insert(std::move(n));
    } else {
      idx = it->second;
      SearchNode& m = node(idx);
      if (!(g < m.g - kImproveTol)) return -1;
      // Only re-parent vertices whose continuous state is identical; aliased
      // off-grid states keep their first parent so replays stay exact.
      if (!same_state(m.lattice_state.state, s.end.state)) return -1;
    }
    SearchNode& n = node(idx);
    n.g = g;
    n.f = g + heuristic(n.lattice_state);
    n.parent = parent;
    n.closed = false;
    n.goal_action = s.goal_action;
    if (s.goal_action) {
      n.sequence = std::move(s.sequence);
      n.accel = Vec3{};
      n.duration = 0.0;
    } else {
      n.sequence.clear();
      n.accel = s.primitive.accel;
      n.duration = s.primitive.duration;
    }
    return idx;
  }

  const SearchProblem& p_;
  LatticeState goal_;
  std::vector<SearchNode> nodes_;
  std::unordered_map<LatticeKey, std::int32_t, LatticeKeyHash> index_;
  std::vector<Successor> buffer_;
  SearchStats stats_;
  std::uint64_t seq_ = 0;
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace

SearchResult astar(const SearchProblem& problem) {
  Searcher s(problem);
  const auto limit = problem.cfg->expansion_limit;
  OpenQueue open;
  open.push(s.entry(s.add_start()));
  while (!open.empty()) {
    const OpenEntry e = open.top();
    open.pop();
    if (s.stale(e)) continue;
    if (s.expansions() >= limit) return s.finish(SearchStatus::ExpansionLimit, -1);
    s.node(e.node).closed = true;
    s.record(e.node);
    if (s.is_goal(e.node)) return s.finish(SearchStatus::Found, e.node);
    s.expand(e.node, [&](std::int32_t child) {
      open.push(s.entry(child));
      return false;
    });
  }
  return s.finish(SearchStatus::Exhausted, -1);
}

SearchResult level_astar(const SearchProblem& problem) {
  Searcher s(problem);
  const auto& grid = *problem.grid;
  const auto& cfg = *problem.cfg;
  const std::int32_t start = s.add_start();
  if (s.is_goal(start)) return s.finish(SearchStatus::Found, start);

  std::vector<OpenQueue> queues(static_cast<std::size_t>(grid.num_levels));
  auto queue_of = [&](std::int32_t i) -> OpenQueue& {
    return queues[static_cast<std::size_t>(s.node(i).lattice_state.level - 1)];
  };
  queue_of(start).push(s.entry(start));

  std::vector<double> step_cost(static_cast<std::size_t>(grid.num_levels));
  for (int l = 1; l <= grid.num_levels; ++l) step_cost[static_cast<std::size_t>(l - 1)] = cfg.rho * grid.res.tau_at(l);

  const auto limit = cfg.expansion_limit;
  while (true) {
    double f_min = kInfiniteCost;
    for (auto& q : queues) {
      while (!q.empty() && s.stale(q.top())) q.pop();
      if (!q.empty()) f_min = std::min(f_min, q.top().f);
    }
    if (!std::isfinite(f_min)) return s.finish(SearchStatus::Exhausted, -1);

    int pick = -1;
    for (int l = 0; l < grid.num_levels; ++l) {
      const auto& q = queues[static_cast<std::size_t>(l)];
      if (q.empty()) continue;
      const OpenEntry& top = q.top();
      if (top.f - f_min > step_cost[static_cast<std::size_t>(l)] + 1e-9) continue;
      if (pick < 0) {
        pick = l;
        continue;
      }
      const OpenEntry& best = queues[static_cast<std::size_t>(pick)].top();
      if (top.h < best.h || (top.h == best.h && top.g > best.g)) pick = l;
    }

    if (s.expansions() >= limit) return s.finish(SearchStatus::ExpansionLimit, -1);
    const OpenEntry e = queues[static_cast<std::size_t>(pick)].top();
    queues[static_cast<std::size_t>(pick)].pop();
    s.node(e.node).closed = true;
    s.record(e.node);
    const std::int32_t goal = s.expand(e.node, [&](std::int32_t child) {
      if (s.is_goal(child)) return true;
      queue_of(child).push(s.entry(child));
      return false;
    });
    if (goal >= 0) return s.finish(SearchStatus::Found, goal);
  }
}

SearchResult plan(const SearchProblem& problem, SearchScheme scheme) {
  return scheme == SearchScheme::AStar ? astar(problem) : level_astar(problem);
}

}  // namespace mres
