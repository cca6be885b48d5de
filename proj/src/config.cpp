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

#include "mres/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mres {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + text + "'", line);
  }
}

std::int64_t parse_int(const std::string& text, int line) {
  std::int64_t v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("expected an integer, got '" + text + "'", line);
  return v;
}

}  // namespace

PlannerConfig parse_config(std::istream& in) {
  PlannerConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line);

    if (key == "rho") {
      cfg.rho = parse_real(value, line);
    } else if (key == "tau1" || key == "tau") {
      cfg.tau1 = parse_real(value, line);
    } else if (key == "v_max") {
      cfg.v_max = parse_real(value, line);
    } else if (key == "u_max") {
      cfg.u_max = parse_real(value, line);
    } else if (key == "du") {
      cfg.du = parse_real(value, line);
    } else if (key == "num_levels") {
      cfg.num_levels = static_cast<int>(parse_int(value, line));
    } else if (key == "level1_halfwidth_cells") {
      cfg.level1_halfwidth_cells = static_cast<int>(parse_int(value, line));
    } else if (key == "clearance") {
      cfg.clearance = parse_real(value, line);
    } else if (key == "expansion_limit") {
      cfg.expansion_limit = parse_int(value, line);
    } else if (key == "replan_horizon") {
      cfg.replan_horizon = parse_real(value, line);
    } else {
      throw ParseError("unknown config key '" + key + "'", line);
    }
  }
  cfg.validate();
  return cfg;
}

PlannerConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string format_config(const PlannerConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "rho = " << cfg.rho << "\n"
     << "tau1 = " << cfg.tau1 << "\n"
     << "v_max = " << cfg.v_max << "\n"
     << "u_max = " << cfg.u_max << "\n"
     << "du = " << cfg.du << "\n"
     << "num_levels = " << cfg.num_levels << "\n"
     << "level1_halfwidth_cells = " << cfg.level1_halfwidth_cells << "\n"
     << "clearance = " << cfg.clearance << "\n"
     << "expansion_limit = " << cfg.expansion_limit << "\n"
     << "replan_horizon = " << cfg.replan_horizon << "\n";
  return os.str();
}

}  // namespace mres
