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

#include "mres/world.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace mres {

namespace {

constexpr const char* kMagic = "MRESWORLD";
constexpr int kVersion = 1;
constexpr int kMaxPlacementTries = 1000;

bool box_inside(const Box& b, const Vec3& lo, const Vec3& hi) {
  for (int a = 0; a < 3; ++a) {
    if (!(b.min[a] <= b.max[a])) return false;
    if (b.min[a] < lo[a] - 1e-9 || b.max[a] > hi[a] + 1e-9) return false;
  }
  return true;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double snap(double v, double cell) { return std::round(v / cell) * cell; }

}  // namespace

void VoxelWorld::validate() const {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw InputError("world: cell size must be > 0");
  for (int a = 0; a < 3; ++a) {
    if (dims[static_cast<std::size_t>(a)] < 1) throw InputError("world: dims must be positive");
  }
  if (!origin.allFinite()) throw InputError("world: origin must be finite");
  if (!(z_min < z_max)) throw InputError("world: altitude range must satisfy zmin < zmax");
  const Vec3 hi = upper();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!box_inside(boxes[i], origin, hi)) {
      throw InputError("world: box " + std::to_string(i) + " outside world bounds");
    }
  }
}

VoxelWorld make_empty_world(double size_x, double size_y, double size_z, double cell_size) {
  VoxelWorld w;
  w.cell_size = cell_size;
  w.dims = {static_cast<int>(std::lround(size_x / cell_size)), static_cast<int>(std::lround(size_y / cell_size)),
            static_cast<int>(std::lround(size_z / cell_size))};
  w.origin = Vec3{};
  w.z_min = 0.0;
  w.z_max = w.dims[2] * cell_size;
  w.validate();
  return w;
}

VoxelWorld generate_world(const WorldGenParams& p) {
  if (p.n_buildings < 0) throw InputError("world gen: n_buildings must be >= 0");
  if (!(p.footprint_min > 0.0 && p.footprint_min <= p.footprint_max)) {
    throw InputError("world gen: footprint range must be positive and ordered");
  }
  if (!(p.height_min > 0.0 && p.height_min <= p.height_max)) {
    throw InputError("world gen: height range must be positive and ordered");
  }
  if (p.footprint_max > std::min(p.size_x, p.size_y)) throw InputError("world gen: footprint larger than world");
  if (p.protected_halfwidth < 0.0) throw InputError("world gen: protected half-width must be >= 0");

  VoxelWorld w = make_empty_world(p.size_x, p.size_y, p.size_z, p.cell_size);
  const Vec3 c = w.center();
  const Box keep_out{Vec3{c.x - p.protected_halfwidth, c.y - p.protected_halfwidth, w.origin.z},
                     Vec3{c.x + p.protected_halfwidth, c.y + p.protected_halfwidth, w.upper().z}};
  const double cell = p.cell_size;
  const double height_cap = std::min(p.height_max, w.extent().z);

  std::mt19937_64 rng(p.seed);
  for (int b = 0; b < p.n_buildings; ++b) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
      const double sx = snap(p.footprint_min + unit(rng) * (p.footprint_max - p.footprint_min), cell);
      const double sy = snap(p.footprint_min + unit(rng) * (p.footprint_max - p.footprint_min), cell);
      const double h = snap(p.height_min + unit(rng) * (height_cap - p.height_min), cell);
      const double x0 = snap(w.origin.x + unit(rng) * (w.extent().x - sx), cell);
      const double y0 = snap(w.origin.y + unit(rng) * (w.extent().y - sy), cell);
      Box box{Vec3{x0, y0, w.origin.z}, Vec3{x0 + sx, y0 + sy, w.origin.z + h}};
      if (!box_inside(box, w.origin, w.upper())) continue;
      const bool overlaps = box.min.x < keep_out.max.x && box.max.x > keep_out.min.x &&
                            box.min.y < keep_out.max.y && box.max.y > keep_out.min.y;
      if (overlaps) continue;
      w.boxes.push_back(box);
      placed = true;
    }
    if (!placed) {
      throw GenerationError("world gen: could not place building " + std::to_string(b) + " after " +
                            std::to_string(kMaxPlacementTries) + " attempts");
    }
  }
  return w;
}

void write_world(const VoxelWorld& w, std::ostream& out) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "dims " << w.dims[0] << ' ' << w.dims[1] << ' ' << w.dims[2] << '\n';
  out << "cell " << fmt6(w.cell_size) << '\n';
  out << "origin " << fmt6(w.origin.x) << ' ' << fmt6(w.origin.y) << ' ' << fmt6(w.origin.z) << '\n';
  out << "alt " << fmt6(w.z_min) << ' ' << fmt6(w.z_max) << '\n';
  for (const auto& b : w.boxes) {
    out << "box " << fmt6(b.min.x) << ' ' << fmt6(b.min.y) << ' ' << fmt6(b.min.z) << ' ' << fmt6(b.max.x) << ' '
        << fmt6(b.max.y) << ' ' << fmt6(b.max.z) << '\n';
  }
}

std::string format_world(const VoxelWorld& world) {
  std::ostringstream os;
  write_world(world, os);
  return os.str();
}

namespace {

// Reads exactly `n` numbers after `keyword` from a line, nothing else.
template <typename T>
std::vector<T> fields(const std::string& line, const char* keyword, std::size_t n, int lineno) {
  std::istringstream is(line);
  std::string key;
  is >> key;
  if (key != keyword) throw ParseError(std::string("expected '") + keyword + "'", lineno);
  std::vector<T> out;
  T v{};
  while (is >> v) out.push_back(v);
  if (!is.eof()) throw ParseError(std::string("malformed '") + keyword + "' line", lineno);
  if (out.size() != n) {
    throw ParseError(std::string("'") + keyword + "' expects " + std::to_string(n) + " values", lineno);
  }
  return out;
}

}  // namespace

VoxelWorld read_world(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next = [&](const char* what) -> const std::string& {
    if (!std::getline(in, line)) throw ParseError(std::string("unexpected end of file, expected ") + what, lineno + 1);
    ++lineno;
    return line;
  };

  {
    std::istringstream is(next("header"));
    std::string magic;
    int version = 0;
    if (!(is >> magic) || magic != kMagic) throw ParseError("missing MRESWORLD header", lineno);
    if (!(is >> version)) throw ParseError("missing format version", lineno);
    if (version != kVersion) throw ParseError("unsupported world version " + std::to_string(version), lineno);
  }

  VoxelWorld w;
  const auto d = fields<long long>(next("dims"), "dims", 3, lineno);
  for (std::size_t a = 0; a < 3; ++a) {
    if (d[a] < 1 || d[a] > 1'000'000) throw ParseError("dims must be positive", lineno);
    w.dims[a] = static_cast<int>(d[a]);
  }
  w.cell_size = fields<double>(next("cell"), "cell", 1, lineno)[0];
  if (!(w.cell_size > 0.0)) throw ParseError("cell size must be > 0", lineno);
  const auto o = fields<double>(next("origin"), "origin", 3, lineno);
  w.origin = Vec3{o[0], o[1], o[2]};
  const auto alt = fields<double>(next("alt"), "alt", 2, lineno);
  w.z_min = alt[0];
  w.z_max = alt[1];
  if (!(w.z_min < w.z_max)) throw ParseError("altitude range must satisfy zmin < zmax", lineno);

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto b = fields<double>(line, "box", 6, lineno);
    Box box{Vec3{b[0], b[1], b[2]}, Vec3{b[3], b[4], b[5]}};
    if (!box_inside(box, w.origin, w.upper())) throw ParseError("box outside world bounds", lineno);
    w.boxes.push_back(box);
  }
  return w;
}

void save_world(const VoxelWorld& world, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write world file '" + path + "'");
  write_world(world, out);
}

VoxelWorld load_world(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open world file '" + path + "'");
  return read_world(in);
}

}  // namespace mres
