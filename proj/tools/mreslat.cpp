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

// Command-line front end: world generation, table precomputation, single
// plans, benchmark suites and reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mres/bench.hpp"
#include "mres/config.hpp"
#include "mres/lattice.hpp"
#include "mres/report.hpp"
#include "mres/search.hpp"
#include "mres/world.hpp"

namespace fs = std::filesystem;
using namespace mres;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPlanFailure = 3;

Vec3 parse_vec3(const std::string& text) {
  Vec3 v;
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) throw InputError("expected x,y,z but got '" + text + "'");
    try {
      std::size_t used = 0;
      v[i] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad number '" + item + "' in '" + text + "'");
    }
    ++i;
  }
  if (i != 3) throw InputError("expected x,y,z but got '" + text + "'");
  return v;
}

// "64" or "64x64x10" (meters).
Vec3 parse_size(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, 'x')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("bad world size '" + text + "'");
    }
  }
  if (parts.size() == 1) return Vec3{parts[0], parts[0], 10.0};
  if (parts.size() == 2) return Vec3{parts[0], parts[1], 10.0};
  if (parts.size() == 3) return Vec3{parts[0], parts[1], parts[2]};
  throw InputError("bad world size '" + text + "'");
}

PlannerConfig config_or_default(const std::string& path) {
  return path.empty() ? PlannerConfig{} : load_config(path);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

std::string slug(const std::string& method) {
  std::string s = method;
  for (char& c : s) {
    if (c == '/') c = '_';
  }
  return s;
}

std::string episode_stem(const EpisodeRecord& e) {
  return slug(e.method.name()) + "_task" + std::to_string(e.task.id);
}

// --- gen-world -------------------------------------------------------------

struct GenWorldArgs {
  std::uint64_t seed = 1;
  int buildings = 20;
  std::string size = "64x64x10";
  double cell = 0.25;
  std::string out;
};

int run_gen_world(const GenWorldArgs& a) {
  WorldGenParams p;
  p.seed = a.seed;
  p.n_buildings = a.buildings;
  const Vec3 size = parse_size(a.size);
  p.size_x = size.x;
  p.size_y = size.y;
  p.size_z = size.z;
  p.cell_size = a.cell;
  const VoxelWorld w = generate_world(p);
  save_world(w, a.out);
  std::cout << "wrote " << a.out << " (" << w.boxes.size() << " boxes)\n";
  return kExitOk;
}

// --- precompute ------------------------------------------------------------

struct PrecomputeArgs {
  std::string config;
  double max_dist = 64.0;
  std::string out;
};

int run_precompute(const PrecomputeArgs& a) {
  const PlannerConfig cfg = config_or_default(a.config);
  const Heuristic1DTable t = build_1d_table(cfg, a.max_dist);
  t.save(a.out);
  std::cout << "wrote " << a.out << " (" << (2 * t.distance_cells() + 1) << " x " << (2 * t.velocity_cells() + 1)
            << " entries, key " << std::hex << t.cache_key() << std::dec << ")\n";
  return kExitOk;
}

// --- plan ------------------------------------------------------------------

struct PlanArgs {
  std::string world;
  std::string config;
  std::string mode = "mres-var";
  std::string heuristic = "h1d";
  std::string scheme = "level";
  std::string start;
  std::string goal;
  std::string trace;
  std::string svg;
};

int run_plan(const PlanArgs& a) {
  const PlannerConfig cfg = config_or_default(a.config);
  const VoxelWorld world = load_world(a.world);
  const DistanceField field = build_distance_field(world);
  const State start{parse_vec3(a.start), Vec3{}};
  Vec3 goal = parse_vec3(a.goal);
  const Vec3 snapped = snap_to_lattice(goal, start.position, goal_grid_spacing(cfg));
  if ((snapped - goal).maxAbs() > 1e-9) {
    std::cerr << "note: goal snapped to the lattice through the start: " << snapped.x << ',' << snapped.y << ','
              << snapped.z << '\n';
    goal = snapped;
  }

  SearchProblem problem;
  problem.start = start;
  problem.goal = State{goal, Vec3{}};
  problem.mode = lattice_mode_from_string(a.mode);
  problem.heuristic = heuristic_from_string(a.heuristic);
  const MultiresGrid grid = make_grid(replanning_origin(start.position, goal, cfg), cfg, problem.mode);
  const Heuristic1DTable table = build_1d_table(cfg, table_distance_for(world));
  problem.grid = &grid;
  problem.cfg = &cfg;
  problem.field = &field;
  problem.table = &table;
  problem.capture_trace = !a.trace.empty();

  const SearchResult r = plan(problem, scheme_from_string(a.scheme));
  std::cout << "status " << to_string(r.status) << "\nexpansions " << r.stats.expansions << "\npushes "
            << r.stats.pushes << "\nwall_time_s " << r.stats.wall_time_s << '\n';
  if (r.status == SearchStatus::Found) {
    std::cout << "cost " << r.cost << "\nduration_s " << trajectory_duration(r.trajectory) << "\nprimitives "
              << r.trajectory.size() << '\n';
  }
  if (!a.trace.empty()) {
    std::ostringstream s;
    write_trace_csv(r.stats.trace, s);
    write_file(a.trace, s.str());
  }
  if (!a.svg.empty() && r.status == SearchStatus::Found) {
    const PlotSeries series{a.mode + "/" + a.heuristic + "/" + a.scheme, r.trajectory, {}};
    write_file(a.svg, trajectory_svg(world, start.position, goal, std::span(&series, 1)));
  }
  return r.status == SearchStatus::Found ? kExitOk : kExitPlanFailure;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string world;
  std::string config;
  int tasks = 25;
  std::uint64_t seed = 1;
  int buildings = 20;
  std::string matrix = "all";
  std::string out_dir = "bench_out";
  bool capture = false;
  int max_steps = 100;
  double max_goal_dist = 0.0;
  std::string table_cache;
};

int run_bench(const BenchArgs& a) {
  SuiteConfig suite;
  suite.cfg = config_or_default(a.config);
  if (a.world.empty()) {
    WorldGenParams p;
    p.seed = a.seed;
    p.n_buildings = a.buildings;
    suite.world = generate_world(p);
  } else {
    suite.world = load_world(a.world);
  }
  suite.methods = parse_matrix(a.matrix);
  suite.sampling.n_tasks = a.tasks;
  suite.sampling.seed = a.seed;
  suite.sampling.max_goal_distance = a.max_goal_dist;
  suite.episode.max_steps = a.max_steps;
  suite.episode.capture_trace = a.capture;
  suite.table_cache = a.table_cache;

  const SuiteResult r = run_suite(suite);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  std::ostringstream results;
  write_results_csv(r, results);
  write_file(dir / "results.csv", results.str());
  std::ostringstream tasks;
  write_tasks_csv(r.tasks, tasks);
  write_file(dir / "tasks.csv", tasks.str());
  write_file(dir / "world.txt", format_world(suite.world));
  write_file(dir / "config.txt", format_config(suite.cfg));
  if (a.capture) {
    for (const auto& e : r.episodes) {
      std::ostringstream ep;
      write_episode_json(e, ep);
      write_file(dir / "episodes" / (episode_stem(e) + ".json"), ep.str());
      std::ostringstream tr;
      write_trace_csv(e.metrics.trace, tr);
      write_file(dir / "traces" / (episode_stem(e) + ".csv"), tr.str());
    }
  }
  for (const auto& row : r.aggregates) {
    if (row.scope != "all") continue;
    std::printf("%-26s success %.2f  mean max-expansions %12.1f  mean cost %9.3f  mean steps %5.2f\n",
                row.method.c_str(), row.success_rate, row.mean_max_expansions, row.mean_cost, row.mean_steps);
  }
  std::cout << "wrote " << (dir / "results.csv").string() << '\n';
  return kExitOk;
}

// --- report ----------------------------------------------------------------

struct ReportArgs {
  std::string in;
  bool histogram = false;
  bool svg = false;
  double bin_width = 0.0;
};

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Vec3 json_vec(const nlohmann::json& j) { return Vec3{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

int run_report(const ReportArgs& a) {
  const fs::path dir(a.in);
  if (!fs::is_directory(dir)) throw InputError("report input directory not found: " + a.in);
  if (!a.histogram && !a.svg) throw InputError("report: nothing to do (use --histogram and/or --svg)");
  PlannerConfig cfg;
  if (fs::exists(dir / "config.txt")) cfg = load_config((dir / "config.txt").string());
  const double width = a.bin_width > 0.0 ? a.bin_width : default_bin_width(cfg);

  if (a.histogram) {
    const auto traces = sorted_files(dir / "traces", ".csv");
    if (traces.empty()) throw ReportError("no f-value traces in " + (dir / "traces").string() + " (bench --capture)");
    for (const auto& t : traces) {
      std::ifstream in(t);
      const auto rows = read_trace_csv(in);
      const Histogram h = f_histogram(rows, width);
      std::ostringstream csv;
      write_histogram_csv(h, csv);
      const auto stem = t.stem().string();
      write_file(dir / "histograms" / (stem + ".csv"), csv.str());
      write_file(dir / "histograms" / (stem + ".svg"), histogram_svg(h, stem));
    }
    std::cout << "wrote " << traces.size() << " histograms\n";
  }

  if (a.svg) {
    const VoxelWorld world = load_world((dir / "world.txt").string());
    const auto episodes = sorted_files(dir / "episodes", ".json");
    if (episodes.empty()) throw ReportError("no episodes in " + (dir / "episodes").string() + " (bench --capture)");
    struct TaskPlot {
      Vec3 start;
      Vec3 goal;
      std::vector<PlotSeries> series;
    };
    std::map<int, TaskPlot> plots;
    for (const auto& p : episodes) {
      std::ifstream in(p);
      const auto j = nlohmann::json::parse(in);
      auto& tp = plots[j.at("task").get<int>()];
      tp.start = json_vec(j.at("start"));
      tp.goal = json_vec(j.at("goal"));
      PlotSeries s;
      s.label = j.at("method").get<std::string>();
      for (const auto& r : j.at("replan_positions")) s.replan_points.push_back(json_vec(r));
      for (const auto& e : j.at("executed")) {
        s.trajectory.push_back(MotionPrimitive{State{json_vec(e.at("p")), json_vec(e.at("v"))}, json_vec(e.at("u")),
                                               e.at("duration").get<double>()});
      }
      tp.series.push_back(std::move(s));
    }
    for (const auto& [task, tp] : plots) {
      write_file(dir / "plots" / ("task" + std::to_string(task) + ".svg"),
                 trajectory_svg(world, tp.start, tp.goal, tp.series));
    }
    std::cout << "wrote " << plots.size() << " trajectory plots\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinodynamic planning on local multiresolution state lattices"};
  app.require_subcommand(1);

  GenWorldArgs gw;
  auto* gen = app.add_subcommand("gen-world", "Generate a procedural city world file");
  gen->add_option("--seed", gw.seed, "Random seed");
  gen->add_option("--buildings", gw.buildings, "Number of buildings");
  gen->add_option("--size", gw.size, "World size in meters: S, SxS or SxSxH");
  gen->add_option("--cell", gw.cell, "Voxel size in meters");
  gen->add_option("--out", gw.out, "Output world file")->required();

  PrecomputeArgs pc;
  auto* pre = app.add_subcommand("precompute", "Build and save the 1D heuristic table");
  pre->add_option("--config", pc.config, "Planner config file");
  pre->add_option("--max-dist", pc.max_dist, "Largest per-axis distance covered (m)");
  pre->add_option("--out", pc.out, "Output table file")->required();

  PlanArgs pl;
  auto* planc = app.add_subcommand("plan", "Plan one trajectory");
  planc->add_option("--world", pl.world, "World file")->required();
  planc->add_option("--config", pl.config, "Planner config file");
  planc->add_option("--mode", pl.mode, "uniform | mres-fixed | mres-var");
  planc->add_option("--heuristic", pl.heuristic, "h1d | htime | zero");
  planc->add_option("--scheme", pl.scheme, "astar | level");
  planc->add_option("--start", pl.start, "Start position x,y,z (at rest)")->required();
  planc->add_option("--goal", pl.goal, "Goal position x,y,z (at rest)")->required();
  planc->add_option("--trace", pl.trace, "Write the f-value trace CSV here");
  planc->add_option("--svg", pl.svg, "Write a top-down SVG plot here");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Run the replanning benchmark");
  bench->add_option("--world", bn.world, "World file (default: generated from --seed)");
  bench->add_option("--config", bn.config, "Planner config file");
  bench->add_option("--tasks", bn.tasks, "Number of tasks");
  bench->add_option("--seed", bn.seed, "Task (and generated world) seed");
  bench->add_option("--buildings", bn.buildings, "Buildings of a generated world");
  bench->add_option("--matrix", bn.matrix, "Comma-separated mode/heuristic/scheme triples, or 'all'");
  bench->add_option("--out-dir", bn.out_dir, "Output directory");
  bench->add_flag("--capture", bn.capture, "Save f-value traces and executed trajectories");
  bench->add_option("--max-steps", bn.max_steps, "Replanning step limit per episode");
  bench->add_option("--max-goal-dist", bn.max_goal_dist, "Upper bound on start-goal distance (0: none)");
  bench->add_option("--table-cache", bn.table_cache, "Heuristic table cache file");

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Render histograms and plots from a bench directory");
  report->add_option("--in", rp.in, "Bench output directory")->required();
  report->add_flag("--histogram", rp.histogram, "f-value histograms from captured traces");
  report->add_flag("--svg", rp.svg, "Top-down trajectory plots per task");
  report->add_option("--bin-width", rp.bin_width, "Histogram bin width (default rho * tau1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen) return run_gen_world(gw);
    if (*pre) return run_precompute(pc);
    if (*planc) return run_plan(pl);
    if (*bench) return run_bench(bn);
    if (*report) return run_report(rp);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ReportError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
