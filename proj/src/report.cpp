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

#include "mres/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace mres {

namespace {

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

}  // namespace

std::int64_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }

double default_bin_width(const PlannerConfig& cfg) { return cfg.rho * cfg.tau1; }

Histogram f_histogram(std::span<const TraceRow> trace, double bin_width) {
  if (trace.empty()) throw ReportError("no f-value trace to histogram");
  if (!(bin_width > 0.0)) throw ReportError("histogram bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  auto bin = [&](double f) { return static_cast<std::int64_t>(std::floor(f / bin_width + 1e-9)); };
  std::int64_t lo = bin(trace.front().f);
  std::int64_t hi = lo;
  for (const auto& r : trace) {
    lo = std::min(lo, bin(r.f));
    hi = std::max(hi, bin(r.f));
  }
  h.first_bin = lo;
  h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& r : trace) ++h.counts[static_cast<std::size_t>(bin(r.f) - lo)];
  return h;
}

void write_histogram_csv(const Histogram& h, std::ostream& out) {
  out << "bin_lo,bin_hi,count\n";
  char buf[96];
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double lo = static_cast<double>(h.first_bin + static_cast<std::int64_t>(i)) * h.bin_width;
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%lld\n", lo, lo + h.bin_width, static_cast<long long>(h.counts[i]));
    out << buf;
  }
}

std::string histogram_svg(const Histogram& h, const std::string& title) {
  const double width = 800.0;
  const double height = 400.0;
  const double margin = 40.0;
  const std::int64_t peak = h.counts.empty() ? 1 : std::max<std::int64_t>(1, *std::max_element(h.counts.begin(), h.counts.end()));
  const double bar_w = (width - 2 * margin) / static_cast<double>(std::max<std::size_t>(1, h.counts.size()));
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
    << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(margin) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title
    << "</text>\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double bh = (height - 2 * margin) * static_cast<double>(h.counts[i]) / static_cast<double>(peak);
    const double lo = static_cast<double>(h.first_bin + static_cast<std::int64_t>(i)) * h.bin_width;
    s << "<rect class=\"bar\" x=\"" << num(margin + static_cast<double>(i) * bar_w) << "\" y=\""
      << num(height - margin - bh) << "\" width=\"" << num(std::max(bar_w - 1.0, 0.5)) << "\" height=\"" << num(bh)
      << "\" fill=\"#4c72b0\"><title>f in [" << num(lo) << ", " << num(lo + h.bin_width) << "): " << h.counts[i]
      << "</title></rect>\n";
  }
  s << "<line x1=\"" << num(margin) << "\" y1=\"" << num(height - margin) << "\" x2=\"" << num(width - margin)
    << "\" y2=\"" << num(height - margin) << "\" stroke=\"black\"/>\n";
  if (!h.counts.empty()) {
    const double lo = static_cast<double>(h.first_bin) * h.bin_width;
    const double hi = lo + static_cast<double>(h.counts.size()) * h.bin_width;
    s << "<text x=\"" << num(margin) << "\" y=\"" << num(height - 12) << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">" << num(lo) << "</text>\n";
    s << "<text x=\"" << num(width - margin) << "\" y=\"" << num(height - 12) << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\" text-anchor=\"end\">" << num(hi) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("expansion_index,f,g,h,level", 0) != 0) {
    throw ReportError("trace CSV header missing");
  }
  std::vector<TraceRow> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    TraceRow r;
    long long idx = 0;
    if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lf,%d", &idx, &r.f, &r.g, &r.h, &r.level) != 5) {
      throw ReportError("malformed trace row at line " + std::to_string(lineno));
    }
    r.expansion = idx;
    out.push_back(r);
  }
  return out;
}

Viewport make_viewport(const VoxelWorld& world, double width, double margin) {
  Viewport v;
  v.x0 = world.origin.x;
  v.y0 = world.origin.y;
  v.width = width;
  v.margin = margin;
  const Vec3 e = world.extent();
  v.scale = (width - 2.0 * margin) / e.x;
  v.height = 2.0 * margin + e.y * v.scale;
  return v;
}

std::vector<Vec3> sample_positions(std::span<const MotionPrimitive> trajectory, double dt) {
  std::vector<Vec3> out;
  if (trajectory.empty()) return out;
  const double total = trajectory_duration(trajectory);
  const auto n = static_cast<std::int64_t>(std::floor(total / dt + 1e-9));
  for (std::int64_t i = 0; i <= n; ++i) {
    out.push_back(trajectory_state(trajectory, static_cast<double>(i) * dt).position);
  }
  const Vec3 end = primitive_end(trajectory.back()).position;
  if ((out.back() - end).maxAbs() > 1e-9) out.push_back(end);
  return out;
}

std::string trajectory_svg(const VoxelWorld& world, const Vec3& start, const Vec3& goal,
                           std::span<const PlotSeries> series) {
  const Viewport vp = make_viewport(world);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(vp.width) << "\" height=\"" << num(vp.height)
    << "\" viewBox=\"0 0 " << num(vp.width) << ' ' << num(vp.height) << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<rect x=\"" << num(vp.px(world.origin.x)) << "\" y=\"" << num(vp.py(world.upper().y)) << "\" width=\""
    << num(world.extent().x * vp.scale) << "\" height=\"" << num(world.extent().y * vp.scale)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double zspan = std::max(world.z_max - world.z_min, 1e-9);
  for (const auto& b : world.boxes) {
    const double t = std::clamp((b.max.z - world.z_min) / zspan, 0.0, 1.0);
    const int shade = static_cast<int>(std::lround(200.0 - 150.0 * t));
    s << "<rect class=\"box\" x=\"" << num(vp.px(b.min.x)) << "\" y=\"" << num(vp.py(b.max.y)) << "\" width=\""
      << num((b.max.x - b.min.x) * vp.scale) << "\" height=\"" << num((b.max.y - b.min.y) * vp.scale)
      << "\" fill=\"rgb(" << shade << ',' << shade << ',' << shade << ")\"/>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& ser = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    const auto pts = sample_positions(ser.trajectory);
    s << "<polyline id=\"traj-" << i << "\" class=\"trajectory\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      s << (k ? " " : "") << num(vp.px(pts[k].x)) << ',' << num(vp.py(pts[k].y));
    }
    s << "\"><title>" << ser.label << "</title></polyline>\n";
    for (const auto& r : ser.replan_points) {
      s << "<circle class=\"replan\" cx=\"" << num(vp.px(r.x)) << "\" cy=\"" << num(vp.py(r.y))
        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
  }

  s << "<circle id=\"start\" cx=\"" << num(vp.px(start.x)) << "\" cy=\"" << num(vp.py(start.y))
    << "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  s << "<rect id=\"goal\" x=\"" << num(vp.px(goal.x) - 6.0) << "\" y=\"" << num(vp.py(goal.y) - 6.0)
    << "\" width=\"12\" height=\"12\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace mres
