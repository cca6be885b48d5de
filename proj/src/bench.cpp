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

#include "mres/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mres/lattice.hpp"

namespace mres {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Removes accumulated rounding noise from values that should be dyadic.
double canonical(double x, double quantum) {
  const double r = std::round(x / quantum) * quantum;
  return std::abs(r - x) < 1e-9 ? r : x;
}

State canonical_state(const State& s, const PlannerConfig& cfg) {
  const auto res = derive_resolutions(cfg);
  State out = s;
  for (int a = 0; a < 3; ++a) {
    out.position[a] = canonical(s.position[a], res.dp[0] / 1024.0);
    out.velocity[a] = canonical(s.velocity[a], res.dv[0] / 1024.0);
  }
  return out;
}

// Executes the first `horizon` seconds of a trajectory.
std::vector<MotionPrimitive> execute_prefix(const std::vector<MotionPrimitive>& traj, double horizon) {
  std::vector<MotionPrimitive> out;
  double left = horizon;
  for (const auto& p : traj) {
    if (left <= 1e-12) break;
    if (p.duration <= left + 1e-12) {
      out.push_back(p);
      left -= p.duration;
    } else {
      out.push_back(MotionPrimitive{p.start, p.accel, left});
      left = 0.0;
    }
  }
  return out;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

std::string Method::name() const {
  return std::string(to_string(mode)) + "/" + to_string(heuristic) + "/" + to_string(scheme);
}

Method method_from_string(const std::string& name) {
  const auto a = name.find('/');
  const auto b = a == std::string::npos ? std::string::npos : name.find('/', a + 1);
  if (b == std::string::npos) throw InputError("method must look like mode/heuristic/scheme: '" + name + "'");
  Method m;
  m.mode = lattice_mode_from_string(name.substr(0, a));
  m.heuristic = heuristic_from_string(name.substr(a + 1, b - a - 1));
  m.scheme = scheme_from_string(name.substr(b + 1));
  return m;
}

std::vector<Method> full_matrix() {
  std::vector<Method> out;
  for (auto mode : {LatticeMode::Uniform, LatticeMode::MResFixed, LatticeMode::MResVariable}) {
    for (auto h : {HeuristicKind::OneD, HeuristicKind::TimeBound}) {
      for (auto s : {SearchScheme::AStar, SearchScheme::LevelAStar}) out.push_back(Method{mode, h, s});
    }
  }
  return out;
}

std::vector<Method> parse_matrix(const std::string& spec) {
  if (spec == "all") return full_matrix();
  std::vector<Method> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    Method m = method_from_string(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw InputError("empty method matrix");
  return out;
}

State default_start(const VoxelWorld& world) {
  const Vec3 c = world.center();
  return State{Vec3{c.x, c.y, world.z_min + 2.0}, Vec3{}};
}

double goal_grid_spacing(const PlannerConfig& cfg) { return 2.0 * derive_resolutions(cfg).dp[0]; }

std::vector<Task> generate_tasks(const VoxelWorld& world, const DistanceField& field, const TaskSampling& sampling,
                                 const PlannerConfig& cfg) {
  const State start = default_start(world);
  if (!state_valid(start.position, field, cfg)) throw GenerationError("task start is not a valid state");
  const MultiresGrid grid = make_grid(start.position, cfg, LatticeMode::MResFixed);
  const double threshold = clearance_threshold(field, cfg);
  const double spacing = goal_grid_spacing(cfg);
  const Vec3 lo{world.origin.x, world.origin.y, world.z_min};
  const Vec3 hi{world.upper().x, world.upper().y, world.z_max};

  std::mt19937_64 rng(sampling.seed);
  std::vector<Task> tasks;
  int rejections = 0;
  while (static_cast<int>(tasks.size()) < sampling.n_tasks) {
    Vec3 g;
    for (int a = 0; a < 3; ++a) g[a] = lo[a] + unit(rng) * (hi[a] - lo[a]);
    g = snap_to_lattice(g, start.position, spacing);
    const double dist = (g - start.position).norm();
    const double margin = std::max(threshold, grid.res.dp_at(grid.level_of(g)));
    const bool ok = dist >= sampling.min_goal_distance - 1e-9 &&
                    (sampling.max_goal_distance <= 0.0 || dist <= sampling.max_goal_distance) &&
                    state_valid(g, field, cfg) && field.distance(g) >= margin;
    if (!ok) {
      if (++rejections > sampling.max_rejections) throw GenerationError("task rejection budget exhausted");
      continue;
    }
    Task t;
    t.id = static_cast<int>(tasks.size());
    t.start = start;
    t.goal = g;
    t.seed = sampling.seed;
    tasks.push_back(t);
  }
  return tasks;
}

Vec3 snap_to_lattice(const Vec3& p, const Vec3& anchor, double spacing) {
  Vec3 o;
  for (int a = 0; a < 3; ++a) o[a] = anchor[a] + std::round((p[a] - anchor[a]) / spacing) * spacing;
  return o;
}

Vec3 replanning_origin(const Vec3& position, const Vec3& goal, const PlannerConfig& cfg) {
  const auto res = derive_resolutions(cfg);
  return snap_to_lattice(position, goal, res.dp_at(cfg.num_levels));
}

EpisodeMetrics run_replanning_episode(const Task& task, const Method& method, const PlannerConfig& cfg,
                                      const WorldStream& stream, const Heuristic1DTable& table,
                                      const EpisodeOptions& options) {
  EpisodeMetrics m;
  VoxelWorld world = stream.base;
  DistanceField field = build_distance_field(world);
  std::uint64_t version = 0;
  const auto res = derive_resolutions(cfg);
  const LatticeKey goal_key = quantize_state(State{task.goal, Vec3{}}, 1, res, task.start.position);
  State state = task.start;

  for (int step = 0; step < options.max_steps; ++step) {
    const Vec3 origin = replanning_origin(state.position, task.goal, cfg);
    const MultiresGrid grid = make_grid(origin, cfg, method.mode);
    SearchProblem problem;
    problem.start = state;
    problem.goal = State{task.goal, Vec3{}};
    problem.mode = method.mode;
    problem.heuristic = method.heuristic;
    problem.grid = &grid;
    problem.cfg = &cfg;
    problem.field = &field;
    problem.table = &table;
    problem.capture_trace = options.capture_trace;

    m.replan_states.push_back(state);
    SearchResult r;
    try {
      r = plan(problem, method.scheme);
    } catch (const InputError& e) {
      m.failure = e.what();
      return m;
    }
    m.steps = step + 1;
    m.last_status = r.status;
    m.max_expansions = std::max(m.max_expansions, r.stats.expansions);
    m.total_expansions += r.stats.expansions;
    m.max_time_s = std::max(m.max_time_s, r.stats.wall_time_s);
    if (options.capture_trace) {
      const std::int64_t offset = m.trace.empty() ? 0 : m.trace.back().expansion + 1;
      for (auto row : r.stats.trace) {
        row.expansion += offset;
        m.trace.push_back(row);
      }
    }
    if (r.status != SearchStatus::Found) {
      m.failure = to_string(r.status);
      return m;
    }
    m.plans.push_back(r.trajectory);
    m.plan_world_versions.push_back(version);

    if (r.trajectory.empty()) {
      m.success = true;
      return m;
    }
    const auto executed = execute_prefix(r.trajectory, cfg.replan_horizon);
    for (const auto& p : executed) {
      m.cost += primitive_cost(p.accel, p.duration, cfg.rho);
      m.executed.push_back(p);
    }
    state = canonical_state(primitive_end(executed.back()), cfg);

    bool revealed = false;
    for (const auto& rv : stream.reveals) {
      if (rv.after_step == step) {
        world.boxes.push_back(rv.box);
        revealed = true;
      }
    }
    if (revealed) {
      field = build_distance_field(world);
      ++version;
    }

    const LatticeKey key = quantize_state(state, 1, res, task.start.position);
    if (key.p == goal_key.p && state.velocity.maxAbs() <= 1e-9 && (state.position - task.goal).maxAbs() <= 1e-6) {
      m.success = true;
      return m;
    }
  }
  m.failure = "step-limit";
  return m;
}

double table_distance_for(const VoxelWorld& world) {
  const Vec3 e = world.extent();
  return std::max({e.x, e.y, world.z_max - world.z_min});
}

std::vector<AggregateRow> aggregate(const std::vector<EpisodeRecord>& episodes, const std::vector<Method>& methods) {
  std::map<std::string, std::map<int, const EpisodeRecord*>> by_method;
  std::set<int> task_ids;
  for (const auto& e : episodes) {
    by_method[e.method.name()][e.task.id] = &e;
    task_ids.insert(e.task.id);
  }

  auto summarize = [&](const Method& m, const std::string& scope, const std::set<int>& subset) {
    AggregateRow row;
    row.method = m.name();
    row.scope = scope;
    const auto& eps = by_method[row.method];
    int solved = 0;
    int counted = 0;
    for (const auto& [id, rec] : eps) {
      if (rec->metrics.success) ++solved;
    }
    row.success_rate = eps.empty() ? 0.0 : static_cast<double>(solved) / static_cast<double>(eps.size());
    for (int id : subset) {
      auto it = eps.find(id);
      if (it == eps.end() || !it->second->metrics.success) continue;
      const auto& mt = it->second->metrics;
      ++counted;
      row.mean_steps += mt.steps;
      row.mean_max_expansions += static_cast<double>(mt.max_expansions);
      row.mean_max_time_s += mt.max_time_s;
      row.mean_cost += mt.cost;
    }
    row.tasks = counted;
    if (counted > 0) {
      row.mean_steps /= counted;
      row.mean_max_expansions /= counted;
      row.mean_max_time_s /= counted;
      row.mean_cost /= counted;
    } else {
      row.mean_steps = row.mean_max_expansions = row.mean_max_time_s = row.mean_cost = std::nan("");
    }
    return row;
  };

  auto solved_by = [&](const Method& m) {
    std::set<int> s;
    for (const auto& [id, rec] : by_method[m.name()]) {
      if (rec->metrics.success) s.insert(id);
    }
    return s;
  };
  auto intersect = [](const std::set<int>& a, const std::set<int>& b) {
    std::set<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    return out;
  };

  std::set<int> common = task_ids;
  for (const auto& m : methods) common = intersect(common, solved_by(m));

  std::vector<AggregateRow> out;
  for (const auto& m : methods) {
    out.push_back(summarize(m, "all", task_ids));
    if (methods.size() > 1) out.push_back(summarize(m, "common", common));
    for (const auto& other : methods) {
      if (other == m || other.mode != m.mode || other.scheme != m.scheme) continue;
      out.push_back(summarize(m, "pair:" + other.name(), intersect(solved_by(m), solved_by(other))));
    }
  }
  std::sort(out.begin(), out.end(), [](const AggregateRow& a, const AggregateRow& b) {
    return std::tie(a.method, a.scope) < std::tie(b.method, b.scope);
  });
  return out;
}

SuiteResult run_suite(const SuiteConfig& suite) {
  suite.cfg.validate();
  if (suite.methods.empty()) throw InputError("suite has no methods");
  SuiteResult out;
  const DistanceField field = build_distance_field(suite.world);
  out.tasks = generate_tasks(suite.world, field, suite.sampling, suite.cfg);

  const double maxd = table_distance_for(suite.world);
  const Heuristic1DTable table = suite.table_cache.empty() ? build_1d_table(suite.cfg, maxd)
                                                           : load_or_build_table(suite.cfg, maxd, suite.table_cache);
  const WorldStream stream{suite.world, suite.reveals};
  for (const auto& m : suite.methods) {
    for (const auto& t : out.tasks) {
      out.episodes.push_back(EpisodeRecord{m, t, run_replanning_episode(t, m, suite.cfg, stream, table, suite.episode)});
    }
  }
  std::sort(out.episodes.begin(), out.episodes.end(), [](const EpisodeRecord& a, const EpisodeRecord& b) {
    const auto an = a.method.name();
    const auto bn = b.method.name();
    return an != bn ? an < bn : a.task.id < b.task.id;
  });
  out.aggregates = aggregate(out.episodes, suite.methods);
  return out;
}

void write_results_csv(const SuiteResult& result, std::ostream& out, bool include_time) {
  out << "method,task,success,steps,max_expansions,max_time_s,cost\n";
  const std::string no_time = "-";
  for (const auto& e : result.episodes) {
    const auto& m = e.metrics;
    out << e.method.name() << ',' << e.task.id << ',' << (m.success ? 1 : 0) << ',' << m.steps << ','
        << m.max_expansions << ',' << (include_time ? fmt(m.max_time_s) : no_time) << ','
        << (m.success ? fmt(m.cost) : "nan") << '\n';
  }
  for (const auto& a : result.aggregates) {
    out << a.method << ',' << a.scope << ',' << fmt(a.success_rate) << ',' << fmt(a.mean_steps) << ','
        << fmt(a.mean_max_expansions) << ',' << (include_time ? fmt(a.mean_max_time_s) : no_time) << ','
        << fmt(a.mean_cost) << '\n';
  }
}

void write_tasks_csv(const std::vector<Task>& tasks, std::ostream& out) {
  out << "task,start_x,start_y,start_z,goal_x,goal_y,goal_z\n";
  for (const auto& t : tasks) {
    out << t.id << ',' << fmt(t.start.position.x) << ',' << fmt(t.start.position.y) << ','
        << fmt(t.start.position.z) << ',' << fmt(t.goal.x) << ',' << fmt(t.goal.y) << ',' << fmt(t.goal.z) << '\n';
  }
}

void write_episode_json(const EpisodeRecord& record, std::ostream& out) {
  using nlohmann::json;
  auto vec = [](const Vec3& v) { return json::array({v.x, v.y, v.z}); };
  json j;
  j["method"] = record.method.name();
  j["task"] = record.task.id;
  j["start"] = vec(record.task.start.position);
  j["goal"] = vec(record.task.goal);
  j["success"] = record.metrics.success;
  j["steps"] = record.metrics.steps;
  json replans = json::array();
  for (const auto& s : record.metrics.replan_states) replans.push_back(vec(s.position));
  j["replan_positions"] = replans;
  json prims = json::array();
  for (const auto& p : record.metrics.executed) {
    prims.push_back({{"p", vec(p.start.position)}, {"v", vec(p.start.velocity)}, {"u", vec(p.accel)},
                     {"duration", p.duration}});
  }
  j["executed"] = prims;
  out << j.dump(1) << '\n';
}

}  // namespace mres
