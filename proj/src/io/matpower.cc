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

// MATPOWER case subset: baseMVA, bus, gen, branch, gencost, genfuel and
// bus_name. Column meanings follow the MATPOWER manual (version 2 format).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>

#include "gridclear/case_io.h"
#include "gridclear/format.h"
#include "gridclear/scenario.h"

namespace gridclear {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// bus
constexpr int kBusI = 0, kBusType = 1, kPd = 2;
// gen
constexpr int kGenBus = 0, kGenStatus = 7, kPmax = 8, kPmin = 9;
// branch
constexpr int kFbus = 0, kTbus = 1, kBrX = 3, kRateA = 5, kBrStatus = 10;
// gencost
constexpr int kModel = 0, kNcost = 3, kCostStart = 4;

struct Row {
  std::vector<double> values;
  int line = 0;
};

struct MatFile {
  std::map<std::string, std::vector<Row>> matrices;
  std::map<std::string, std::vector<std::string>> cells;
  std::map<std::string, std::vector<int>> cell_lines;
  std::map<std::string, double> scalars;
};

class MatParser {
 public:
  MatParser(std::istream& in, const std::string& source) : source_(source) {
    std::string raw;
    while (std::getline(in, raw)) lines_.push_back(strip_comment(raw));
    if (in.bad()) throw IoError(source + ": read error");
  }

  MatFile parse() {
    MatFile out;
    for (line_ = 0; line_ < lines_.size(); ++line_) {
      const std::string& l = lines_[line_];
      const auto p = l.find("mpc.");
      if (p == std::string::npos) continue;
      std::size_t i = p + 4;
      std::size_t j = i;
      while (j < l.size() && (std::isalnum(static_cast<unsigned char>(l[j])) || l[j] == '_')) ++j;
      const std::string name = l.substr(i, j - i);
      const auto eq = l.find('=', j);
      if (eq == std::string::npos) continue;
      std::size_t k = eq + 1;
      while (k < l.size() && std::isspace(static_cast<unsigned char>(l[k]))) ++k;
      if (k < l.size() && l[k] == '[') {
        out.matrices[name] = matrix(name, k + 1);
      } else if (k < l.size() && l[k] == '{') {
        cells(name, k + 1, &out.cells[name], &out.cell_lines[name]);
      } else {
        const auto semi = l.find(';', k);
        std::string text = l.substr(k, semi == std::string::npos ? std::string::npos : semi - k);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
        if (const auto v = parse_number(text)) out.scalars[name] = *v;
      }
    }
    return out;
  }

 private:
  static std::string strip_comment(const std::string& raw) {
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '\'') quoted = !quoted;
      if (raw[i] == '%' && !quoted) return raw.substr(0, i);
    }
    return raw;
  }

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ParseError(source_, static_cast<int>(line_) + 1, field, message);
  }

  // Reads rows until the closing bracket; rows end at ';' or newline.
  std::vector<Row> matrix(const std::string& name, std::size_t col) {
    std::vector<Row> rows;
    Row current;
    auto flush = [&] {
      if (!current.values.empty()) rows.push_back(std::move(current));
      current = {};
    };
    for (; line_ < lines_.size(); ++line_, col = 0) {
      const std::string& l = lines_[line_];
      std::string token;
      auto take = [&] {
        if (token.empty()) return;
        const auto v = parse_number(token);
        if (!v) fail("mpc." + name, "'" + token + "' is not a number");
        if (current.values.empty()) current.line = static_cast<int>(line_) + 1;
        current.values.push_back(*v);
        token.clear();
      };
      for (std::size_t i = col; i < l.size(); ++i) {
        const char c = l[i];
        if (c == ']') {
          take();
          flush();
          return rows;
        }
        if (c == ';') {
          take();
          flush();
        } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
          take();
        } else {
          token.push_back(c);
        }
      }
      take();
      flush();
    }
    fail("mpc." + name, "missing closing ']'");
  }

  void cells(const std::string& name, std::size_t col, std::vector<std::string>* out,
             std::vector<int>* lines) {
    for (; line_ < lines_.size(); ++line_, col = 0) {
      const std::string& l = lines_[line_];
      for (std::size_t i = col; i < l.size(); ++i) {
        if (l[i] == '}') return;
        if (l[i] != '\'') continue;
        std::string text;
        std::size_t j = i + 1;
        for (; j < l.size(); ++j) {
          if (l[j] == '\'') {
            if (j + 1 < l.size() && l[j + 1] == '\'') {
              text.push_back('\'');
              ++j;
              continue;
            }
            break;
          }
          text.push_back(l[j]);
        }
        if (j >= l.size()) fail("mpc." + name, "unterminated string");
        out->push_back(std::move(text));
        lines->push_back(static_cast<int>(line_) + 1);
        i = j;
      }
    }
    fail("mpc." + name, "missing closing '}'");
  }

  const std::string& source_;
  std::vector<std::string> lines_;
  std::size_t line_ = 0;
};

// Generator cost in $/h as a function of output in MW.
class CostCurve {
 public:
  CostCurve(const Row& row, const std::string& source) {
    const int model = static_cast<int>(row.values[kModel]);
    const int n = static_cast<int>(row.values[kNcost]);
    const std::size_t need = kCostStart + static_cast<std::size_t>(model == 1 ? 2 * n : n);
    if ((model != 1 && model != 2) || n < 1 || row.values.size() < need) {
      throw ParseError(source, row.line, "mpc.gencost", "unsupported or short cost row");
    }
    polynomial_ = model == 2;
    if (polynomial_) {
      coef_.assign(row.values.begin() + kCostStart, row.values.begin() + need);
    } else {
      for (int i = 0; i < n; ++i) {
        xs_.push_back(row.values[kCostStart + 2 * i]);
        ys_.push_back(row.values[kCostStart + 2 * i + 1]);
      }
      for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (!(xs_[i] > xs_[i - 1])) {
          throw ParseError(source, row.line, "mpc.gencost", "piecewise breakpoints must increase");
        }
      }
    }
  }

  double operator()(double p) const {
    if (polynomial_) {
      double v = 0.0;
      for (double c : coef_) v = v * p + c;
      return v;
    }
    if (xs_.size() == 1) return ys_[0];
    std::size_t k = 1;
    while (k + 1 < xs_.size() && p > xs_[k]) ++k;
    const double slope = (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]);
    return ys_[k - 1] + slope * (p - xs_[k - 1]);
  }

 private:
  bool polynomial_ = true;
  std::vector<double> coef_;
  std::vector<double> xs_, ys_;
};

const std::vector<Row>& table(const MatFile& f, const char* name, const std::string& source) {
  const auto it = f.matrices.find(name);
  if (it == f.matrices.end()) {
    throw ParseError(source, 0, std::string("mpc.") + name, "table is missing");
  }
  return it->second;
}

void need_columns(const Row& r, std::size_t n, const char* name, const std::string& source) {
  if (r.values.size() < n) {
    throw ParseError(source, r.line, std::string("mpc.") + name,
                     "row has " + std::to_string(r.values.size()) + " columns, need " +
                         std::to_string(n));
  }
}

int as_bus_id(double v, int line, const std::string& source) {
  if (v != std::floor(v) || std::abs(v) > 2e9) {
    throw ParseError(source, line, "bus id", "'" + format_number(v) + "' is not an integer");
  }
  return static_cast<int>(v);
}

}  // namespace

std::map<std::string, EnergyClass> MatpowerOptions::default_fuel_classes() {
  return {{"wind", EnergyClass::kGreen},    {"solar", EnergyClass::kGreen},
          {"hydro", EnergyClass::kGreen},   {"nuclear", EnergyClass::kGreen},
          {"coal", EnergyClass::kBlack},    {"ng", EnergyClass::kBlack},
          {"gas", EnergyClass::kBlack},     {"oil", EnergyClass::kBlack}};
}

Case read_matpower_case(std::istream& in, const MatpowerOptions& options,
                        const std::string& source) {
  if (options.offer_blocks < 1) throw std::invalid_argument("offer_blocks must be at least 1");
  const MatFile f = MatParser(in, source).parse();
  Case c;
  c.name = source;
  const auto base = f.scalars.find("baseMVA");
  if (base == f.scalars.end()) throw ParseError(source, 0, "mpc.baseMVA", "missing");
  c.base_mva = base->second;
  if (!(c.base_mva > 0.0)) throw ParseError(source, 0, "mpc.baseMVA", "must be positive");

  std::map<std::string, double> factors = default_emission_factors();
  for (const auto& [fuel, v] : options.emission_factors) factors[fuel] = v;

  // Buses. Type 4 marks isolated buses, which are dropped with everything
  // attached to them.
  const auto& bus_rows = table(f, "bus", source);
  const auto names_it = f.cells.find("bus_name");
  std::vector<Bus> buses;
  std::map<int, double> demand;
  std::optional<BusId> reference;
  int isolated = 0;
  for (std::size_t i = 0; i < bus_rows.size(); ++i) {
    const Row& r = bus_rows[i];
    need_columns(r, kPd + 1, "bus", source);
    const int id = as_bus_id(r.values[kBusI], r.line, source);
    const int type = static_cast<int>(r.values[kBusType]);
    if (type == 4) {
      ++isolated;
      continue;
    }
    std::string name;
    if (names_it != f.cells.end() && i < names_it->second.size()) name = names_it->second[i];
    buses.push_back({id, name, {}});
    demand[id] += r.values[kPd];
    if (type == 3 && !reference) reference = id;
  }
  if (buses.empty()) throw ParseError(source, 0, "mpc.bus", "no in-service buses");
  if (!reference) {
    reference = buses.front().id;
    c.notes.push_back("no type-3 bus; reference set to bus " + std::to_string(*reference));
  }
  if (isolated > 0) c.notes.push_back(std::to_string(isolated) + " isolated buses dropped");

  // Branches. Parallel branches are merged: susceptances add and the merged
  // rating is the largest total flow at which no member exceeds its own rating.
  struct Merged {
    BusId from, to;
    double b = 0.0;
    double ratio = kInf;  // min rating / susceptance over limited members
    int members = 0;
  };
  std::vector<Merged> merged;
  std::map<std::pair<int, int>, std::size_t> by_pair;
  int out_of_service = 0;
  for (const Row& r : table(f, "branch", source)) {
    need_columns(r, kBrStatus + 1, "branch", source);
    if (r.values[kBrStatus] <= 0.0) {
      ++out_of_service;
      continue;
    }
    const int a = as_bus_id(r.values[kFbus], r.line, source);
    const int b = as_bus_id(r.values[kTbus], r.line, source);
    if (!demand.count(a) || !demand.count(b)) {
      ++out_of_service;
      continue;
    }
    const double x = r.values[kBrX];
    if (!(x > 0.0)) {
      throw ParseError(source, r.line, "mpc.branch x", "reactance must be positive");
    }
    const double susceptance = c.base_mva / x;
    const double rate = r.values[kRateA];
    if (rate < 0.0) throw ParseError(source, r.line, "mpc.branch rateA", "negative rating");
    const auto key = std::minmax(a, b);
    auto [it, fresh] = by_pair.try_emplace({key.first, key.second}, merged.size());
    if (fresh) merged.push_back({a, b});
    Merged& m = merged[it->second];
    m.b += susceptance;
    if (rate > 0.0) m.ratio = std::min(m.ratio, rate / susceptance);
    ++m.members;
  }
  std::vector<Line> lines;
  int folded = 0;
  for (const Merged& m : merged) {
    folded += m.members - 1;
    lines.push_back(make_line(m.from, m.to, m.b, std::isfinite(m.ratio) ? m.ratio * m.b : kInf));
  }
  if (out_of_service > 0) {
    c.notes.push_back(std::to_string(out_of_service) + " out-of-service branches skipped");
  }
  if (folded > 0) c.notes.push_back(std::to_string(folded) + " parallel branches merged");

  // Generators.
  const auto& gen_rows = table(f, "gen", source);
  const auto& cost_rows = table(f, "gencost", source);
  if (cost_rows.size() < gen_rows.size()) {
    throw ParseError(source, 0, "mpc.gencost", "fewer cost rows than generators");
  }
  const auto fuels_it = f.cells.find("genfuel");
  const int k_blocks = options.offer_blocks;
  int skipped_gens = 0, reordered = 0;
  for (std::size_t k = 0; k < gen_rows.size(); ++k) {
    const Row& r = gen_rows[k];
    need_columns(r, kPmin + 1, "gen", source);
    need_columns(cost_rows[k], kCostStart, "gencost", source);
    const int bus = as_bus_id(r.values[kGenBus], r.line, source);
    const double pmax = r.values[kPmax];
    if (r.values[kGenStatus] <= 0.0 || !demand.count(bus) || !(pmax > 0.0)) {
      ++skipped_gens;
      continue;
    }
    Generator g;
    g.id = "g" + std::to_string(k + 1);
    g.bus = bus;
    if (fuels_it != f.cells.end() && k < fuels_it->second.size()) g.fuel = fuels_it->second[k];
    const auto cls = options.fuel_class.find(g.fuel);
    if (cls == options.fuel_class.end()) {
      throw ParseError(source, r.line, "mpc.genfuel",
                       "no energy class mapping for fuel '" + g.fuel + "'");
    }
    g.energy_class = cls->second;
    const auto factor = factors.find(g.fuel);
    if (factor == factors.end()) {
      throw ParseError(source, r.line, "mpc.genfuel",
                       "no emission factor for fuel '" + g.fuel + "'");
    }
    g.emission_factor = factor->second;

    const CostCurve cost(cost_rows[k], source);
    const double pmin = options.respect_pmin ? std::clamp(r.values[kPmin], 0.0, pmax) : 0.0;
    const double width = pmax / k_blocks;
    double last_price = -kInf;
    bool bumped = false;
    for (int l = 0; l < k_blocks; ++l) {
      const double lo = l * width;
      const double hi = l + 1 == k_blocks ? pmax : (l + 1) * width;
      double price = (cost(hi) - cost(lo)) / (hi - lo);
      if (price < last_price) {
        price = last_price;
        bumped = true;
      }
      last_price = price;
      const double qmin = std::clamp(pmin - lo, 0.0, hi - lo);
      g.blocks.push_back({qmin, hi - lo, price});
    }
    if (bumped) ++reordered;
    c.book.generators.push_back(std::move(g));
  }
  if (skipped_gens > 0) {
    c.notes.push_back(std::to_string(skipped_gens) +
                      " generators skipped (out of service or no capacity)");
  }
  if (reordered > 0) {
    c.notes.push_back(std::to_string(reordered) +
                      " generators had falling marginal cost; block prices flattened");
  }

  // Loads bid their nominal demand.
  int negative = 0;
  for (const Bus& b : buses) {
    const double pd = demand[b.id];
    if (pd < 0.0) ++negative;
    if (!(pd > 0.0)) continue;
    c.book.loads.push_back({"d" + std::to_string(b.id), b.id,
                            {{0.0, pd, options.default_bid_value}}, 0.0});
  }
  if (negative > 0) {
    c.notes.push_back(std::to_string(negative) + " buses with negative demand skipped");
  }

  c.net = Network(std::move(buses), std::move(lines), *reference);
  return c;
}

}  // namespace gridclear
