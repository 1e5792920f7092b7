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

// Small hand-built instances shared by the unit and acceptance tests. The
// same instances ship as data/cases/*.case.

#ifndef GRIDCLEAR_TESTS_FIXTURES_H_
#define GRIDCLEAR_TESTS_FIXTURES_H_

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gridclear/grid.h"
#include "gridclear/orderbook.h"

namespace gridclear::testing {

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

struct Instance {
  Network net;
  OrderBook book;
};

// Triangle G(1) - B(2) - L(3), equal susceptances, 1 MW limit on G-B.
// Green 4 MW at $0 on G, black 4 MW at $10 on B, load up to 10 MWh at $4 on
// L with green premium `alpha`.
inline Instance three_bus(double alpha = 3.0) {
  Instance in;
  in.net = Network({{1, "G", {}}, {2, "B", {}}, {3, "L", {}}},
                   {make_line(1, 2, 1.0, 1.0), make_line(2, 3, 1.0, kUnlimited),
                    make_line(1, 3, 1.0, kUnlimited)},
                   1);
  in.book.generators = {
      {"g_green", 1, EnergyClass::kGreen, {{0.0, 4.0, 0.0}}, 12.0, "wind"},
      {"g_black", 2, EnergyClass::kBlack, {{0.0, 4.0, 10.0}}, 900.0, "coal"},
  };
  in.book.loads = {{"load", 3, {{0.0, 10.0, 4.0}}, alpha}};
  return in;
}

// Black bus K(1), junction M(2), load L(3) and a green bus G(4) hanging off
// M. Reactances K-M 0.04, M-L 0.05 (10 MW limit), K-L 0.01, G-M 0.01, with
// susceptance 1/x. The G-M spur is unlimited so all green power enters the
// meshed part at M.
inline Instance four_bus(double load_value = 12.6, double black_cost = 10.0) {
  Instance in;
  in.net = Network({{1, "K", {}}, {2, "M", {}}, {3, "L", {}}, {4, "G", {}}},
                   {make_line(1, 2, 25.0, kUnlimited), make_line(2, 3, 20.0, 10.0),
                    make_line(1, 3, 100.0, kUnlimited),
                    make_line(4, 2, 100.0, kUnlimited)},
                   1);
  in.book.generators = {
      {"green", 4, EnergyClass::kGreen, {{0.0, 30.0, 0.0}}, 12.0, "wind"},
      {"black", 1, EnergyClass::kBlack, {{0.0, 150.0, black_cost}}, 900.0, "coal"},
  };
  in.book.loads = {{"load", 3, {{0.0, 200.0, load_value}}, 0.0}};
  return in;
}

// Random connected instance: a spanning tree plus a few chords, each line
// limited with probability 1/2, at most `max_participants` generators and
// loads with up to three blocks.
inline Instance random_instance(std::mt19937_64& rng, int max_buses = 6,
                                int max_participants = 8) {
  std::uniform_int_distribution<int> nbus_d(1, max_buses);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int nb = nbus_d(rng);
  std::vector<Bus> buses;
  for (int i = 0; i < nb; ++i) buses.push_back({i + 1, "b" + std::to_string(i + 1), {}});
  std::vector<Line> lines;
  auto limit = [&] { return u01(rng) < 0.5 ? 0.5 + 5.0 * u01(rng) : kUnlimited; };
  for (int i = 1; i < nb; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    lines.push_back(make_line(parent(rng) + 1, i + 1, 0.5 + 10.0 * u01(rng), limit()));
  }
  for (int c = 0; c < nb / 2; ++c) {
    std::uniform_int_distribution<int> pick(1, nb);
    const int a = pick(rng), b = pick(rng);
    bool dup = a == b;
    for (const auto& l : lines) {
      if ((l.from_bus == a && l.to_bus == b) || (l.from_bus == b && l.to_bus == a)) dup = true;
    }
    if (!dup) lines.push_back(make_line(a, b, 0.5 + 10.0 * u01(rng), limit()));
  }
  Instance in;
  in.net = Network(std::move(buses), std::move(lines), 1);

  std::uniform_int_distribution<int> np_d(2, max_participants);
  std::uniform_int_distribution<int> bus_d(1, nb);
  std::uniform_int_distribution<int> blocks_d(1, 3);
  const int np = np_d(rng);
  for (int p = 0; p < np; ++p) {
    const bool is_gen = p == 0 || (p != 1 && u01(rng) < 0.5);
    const int nblk = blocks_d(rng);
    if (is_gen) {
      Generator g;
      g.id = "g" + std::to_string(p);
      g.bus = bus_d(rng);
      g.energy_class = u01(rng) < 0.5 ? EnergyClass::kGreen : EnergyClass::kBlack;
      g.emission_factor = g.energy_class == EnergyClass::kGreen ? 10.0 : 800.0;
      double price = 20.0 * u01(rng);
      for (int k = 0; k < nblk; ++k) {
        g.blocks.push_back({0.0, 0.5 + 5.0 * u01(rng), price});
        price += 5.0 * u01(rng);
      }
      in.book.generators.push_back(std::move(g));
    } else {
      Load l;
      l.id = "d" + std::to_string(p);
      l.bus = bus_d(rng);
      l.alpha = 6.0 * u01(rng);
      double value = 10.0 + 30.0 * u01(rng);
      for (int k = 0; k < nblk; ++k) {
        l.blocks.push_back({0.0, 0.5 + 5.0 * u01(rng), value});
        value -= 5.0 * u01(rng);
      }
      in.book.loads.push_back(std::move(l));
    }
  }
  return in;
}

}  // namespace gridclear::testing

#endif  // GRIDCLEAR_TESTS_FIXTURES_H_
