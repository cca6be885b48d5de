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

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mres/core.hpp"
#include "mres/search.hpp"
#include "mres/world.hpp"

namespace mres {

class ReportError : public Error {
 public:
  using Error::Error;
};

/// Counts of expanded f-values in bins [first_bin * w, (first_bin + 1) * w), ...
struct Histogram {
  double bin_width = 8.0;
  std::int64_t first_bin = 0;
  std::vector<std::int64_t> counts;

  std::int64_t total() const;
};

/// Throws ReportError when the trace is empty.
Histogram f_histogram(std::span<const TraceRow> trace, double bin_width);

/// Default bin width: the cheapest Level-1 action, rho * tau1.
double default_bin_width(const PlannerConfig& cfg);

void write_histogram_csv(const Histogram& h, std::ostream& out);
std::string histogram_svg(const Histogram& h, const std::string& title);

std::vector<TraceRow> read_trace_csv(std::istream& in);

/// World-to-pixel map of the top-down plot: 800 px wide, 20 px margin,
/// y pointing up in the world and down in the image.
struct Viewport {
  double x0 = 0.0;
  double y0 = 0.0;
  double scale = 1.0;
  double width = 800.0;
  double height = 800.0;
  double margin = 20.0;

  double px(double x) const { return margin + (x - x0) * scale; }
  double py(double y) const { return height - margin - (y - y0) * scale; }
};

Viewport make_viewport(const VoxelWorld& world, double width = 800.0, double margin = 20.0);

struct PlotSeries {
  std::string label;
  std::vector<MotionPrimitive> trajectory;
  std::vector<Vec3> replan_points;
};

/// Polyline vertices of a trajectory sampled every `dt` seconds, end included.
std::vector<Vec3> sample_positions(std::span<const MotionPrimitive> trajectory, double dt = 0.05);

/// Top-down plot: boxes shaded by height, one polyline per series (stroke id
/// `traj-<index>`), start circle, goal square and replan markers.
std::string trajectory_svg(const VoxelWorld& world, const Vec3& start, const Vec3& goal,
                           std::span<const PlotSeries> series);

}  // namespace mres
