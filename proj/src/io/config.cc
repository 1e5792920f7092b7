// Copyright 2026 The gridclear Authors
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

#include "gridclear/config.h"

#include <cctype>
#include <cmath>
#include <fstream>

#include "gridclear/format.h"

namespace gridclear {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

RunConfig read_config(std::istream& in, const std::string& source) {
  RunConfig cfg;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source, line_no, "", "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto number = [&]() {
      const auto v = parse_number(value);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(source, line_no, key, "'" + value + "' is not a finite number");
      }
      return *v;
    };
    auto boolean = [&]() {
      if (value == "true") return true;
      if (value == "false") return false;
      throw ParseError(source, line_no, key, "expected true or false");
    };
    auto integer = [&](double lo) {
      const double v = number();
      if (v != std::floor(v) || v < lo) {
        throw ParseError(source, line_no, key, "'" + value + "' is not a valid integer");
      }
      return v;
    };

    if (key == "target_res_share") {
      cfg.scenario.target_res_share = number();
    } else if (key == "alpha_mean") {
      cfg.scenario.alpha_mean = number();
    } else if (key == "alpha_std") {
      cfg.scenario.alpha_std = number();
    } else if (key == "rng_seed") {
      cfg.scenario.rng_seed = static_cast<std::uint64_t>(integer(0.0));
    } else if (key == "homes_per_mw") {
      cfg.scenario.homes_per_mw = number();
    } else if (key == "parallel") {
      cfg.scenario.parallel = boolean();
    } else if (key == "tol_feas") {
      cfg.scenario.clearing.tolerances.feasibility = number();
    } else if (key == "tol_gap") {
      cfg.scenario.clearing.tolerances.duality_gap = number();
    } else if (key == "tol_congest") {
      cfg.scenario.clearing.tol_congest = number();
    } else if (key.rfind("emission_factor.", 0) == 0) {
      const double v = number();
      cfg.scenario.emission_factors[key.substr(16)] = v;
      cfg.import.emission_factors[key.substr(16)] = v;
    } else if (key.rfind("fuel_class.", 0) == 0) {
      const auto cls = parse_energy_class(value);
      if (!cls) throw ParseError(source, line_no, key, "expected green or black");
      cfg.import.fuel_class[key.substr(11)] = *cls;
    } else if (key == "offer_blocks") {
      cfg.import.offer_blocks = static_cast<int>(integer(1.0));
    } else if (key == "default_bid_value") {
      cfg.import.default_bid_value = number();
    } else if (key == "respect_pmin") {
      cfg.import.respect_pmin = boolean();
    } else {
      throw ParseError(source, line_no, key, "unknown key");
    }
  }
  if (in.bad()) throw IoError(source + ": read error");
  if (const auto r = cfg.scenario.validate(); !r.ok()) {
    throw ParseError(source, 0, r.findings().front().code, r.findings().front().message);
  }
  return cfg;
}

RunConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_config(in, path);
}

}  // namespace gridclear
