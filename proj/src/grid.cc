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

#include "gridclear/grid.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "gridclear/lp.h"

namespace gridclear {

Line make_line(BusId from, BusId to, double susceptance, double rating) {
  Line line{from, to, susceptance, -lp::kInf, lp::kInf};
  if (std::isfinite(rating)) {
    line.flow_min = -rating;
    line.flow_max = rating;
  }
  return line;
}

Network::Network(std::vector<Bus> buses, std::vector<Line> lines,
                 BusId reference_bus)
    : buses_(std::move(buses)),
      lines_(std::move(lines)),
      reference_bus_(reference_bus) {
  index_.reserve(buses_.size());
  for (std::size_t i = 0; i < buses_.size(); ++i) {
    index_.emplace(buses_[i].id, i);  // first occurrence wins on duplicates
  }
}

std::optional<std::size_t> Network::bus_index(BusId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Network::index_of(BusId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw std::out_of_range("unknown bus " + std::to_string(id));
  }
  return it->second;
}

Network Network::copper_plate() const {
  std::vector<Line> lines = lines_;
  for (auto& l : lines) {
    l.flow_min = -lp::kInf;
    l.flow_max = lp::kInf;
  }
  return Network(buses_, std::move(lines), reference_bus_);
}

ValidationReport validate_network(const Network& net) {
  ValidationReport report;
  std::set<BusId> ids;
  for (const auto& b : net.buses()) {
    if (!ids.insert(b.id).second) {
      report.add("duplicate bus", "bus id " + std::to_string(b.id) + " appears more than once");
    }
  }
  if (!net.bus_index(net.reference_bus())) {
    report.add("missing reference",
               "reference bus " + std::to_string(net.reference_bus()) + " does not exist");
  }

  std::set<std::pair<BusId, BusId>> pairs;
  for (std::size_t k = 0; k < net.lines().size(); ++k) {
    const Line& l = net.lines()[k];
    const std::string name = "line " + std::to_string(k) + " (" +
                             std::to_string(l.from_bus) + "-" +
                             std::to_string(l.to_bus) + ")";
    if (!net.bus_index(l.from_bus) || !net.bus_index(l.to_bus)) {
      report.add("unknown bus", name + " references a bus that does not exist");
    }
    if (l.from_bus == l.to_bus) report.add("self loop", name + " starts and ends at the same bus");
    if (!(l.susceptance > 0.0) || !std::isfinite(l.susceptance)) {
      report.add("nonpositive susceptance", name + " has susceptance " + std::to_string(l.susceptance));
    }
    if (std::isnan(l.flow_min) || std::isnan(l.flow_max) || l.flow_min > 0.0 || l.flow_max < 0.0) {
      report.add("limits do not bracket zero", name + " limits must satisfy flow_min <= 0 <= flow_max");
    }
    auto key = std::minmax(l.from_bus, l.to_bus);
    if (!pairs.insert(key).second) {
      report.add("parallel lines", name + " duplicates another line between the same buses");
    }
  }

  // Connectivity by union-find over known buses.
  const std::size_t n = net.num_buses();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (const auto& l : net.lines()) {
    auto a = net.bus_index(l.from_bus);
    auto b = net.bus_index(l.to_bus);
    if (a && b) parent[find(*a)] = find(*b);
  }
  std::size_t components = 0;
  std::size_t isolated_example = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) == i) ++components;
  }
  if (components > 1) {
    const std::size_t root0 = find(0);
    for (std::size_t i = 0; i < n; ++i) {
      if (find(i) != root0) {
        isolated_example = i;
        break;
      }
    }
    report.add("disconnected",
               std::to_string(components) + " connected components; bus " +
                   std::to_string(net.buses()[isolated_example].id) +
                   " is not connected to bus " + std::to_string(net.buses()[0].id));
  }
  return report;
}

std::vector<double> dc_flows(const Network& net, std::span<const double> angles) {
  if (angles.size() != net.num_buses()) {
    throw std::invalid_argument("dc_flows: expected " + std::to_string(net.num_buses()) +
                                " angles, got " + std::to_string(angles.size()));
  }
  std::vector<double> flows;
  flows.reserve(net.num_lines());
  for (const auto& l : net.lines()) {
    flows.push_back(l.susceptance *
                    (angles[net.index_of(l.from_bus)] - angles[net.index_of(l.to_bus)]));
  }
  return flows;
}

std::vector<double> bus_injections(const Network& net, std::span<const double> flows) {
  if (flows.size() != net.num_lines()) {
    throw std::invalid_argument("bus_injections: flow vector size mismatch");
  }
  std::vector<double> inj(net.num_buses(), 0.0);
  for (std::size_t k = 0; k < flows.size(); ++k) {
    const Line& l = net.lines()[k];
    inj[net.index_of(l.from_bus)] += flows[k];
    inj[net.index_of(l.to_bus)] -= flows[k];
  }
  return inj;
}

std::vector<double> solve_angles(const Network& net, std::span<const double> injections) {
  const std::size_t n = net.num_buses();
  if (injections.size() != n) {
    throw std::invalid_argument("solve_angles: injection vector size mismatch");
  }
  double total = 0.0;
  double scale = 1.0;
  for (double p : injections) {
    total += p;
    scale = std::max(scale, std::abs(p));
  }
  if (std::abs(total) > 1e-9 * scale * static_cast<double>(n)) {
    throw std::invalid_argument("solve_angles: injections do not balance");
  }
  const std::size_t ref = net.index_of(net.reference_bus());

  // Reduced nodal susceptance matrix with the reference row/column removed.
  auto reduced = [&](std::size_t i) -> long {
    if (i == ref) return -1;
    return static_cast<long>(i < ref ? i : i - 1);
  };
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& l : net.lines()) {
    const long a = reduced(net.index_of(l.from_bus));
    const long b = reduced(net.index_of(l.to_bus));
    const double s = l.susceptance;
    if (a >= 0) trips.emplace_back(a, a, s);
    if (b >= 0) trips.emplace_back(b, b, s);
    if (a >= 0 && b >= 0) {
      trips.emplace_back(a, b, -s);
      trips.emplace_back(b, a, -s);
    }
  }
  std::vector<double> angles(n, 0.0);
  if (n <= 1) return angles;
  Eigen::SparseMatrix<double> lap(n - 1, n - 1);
  lap.setFromTriplets(trips.begin(), trips.end());
  Eigen::VectorXd rhs(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (const long r = reduced(i); r >= 0) rhs[r] = injections[i];
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(lap);
  if (ldlt.info() != Eigen::Success) {
    throw std::invalid_argument("solve_angles: network is disconnected");
  }
  Eigen::VectorXd theta = ldlt.solve(rhs);
  for (std::size_t i = 0; i < n; ++i) {
    if (const long r = reduced(i); r >= 0) angles[i] = theta[r];
  }
  return angles;
}

double max_deliverable(const Network& net, std::span<const Source> sources, BusId sink) {
  lp::LinearProgram prog;
  const std::size_t n = net.num_buses();
  std::vector<std::vector<lp::Term>> balance(n);

  const int withdraw = prog.add_variable("sink", 0.0, lp::kInf, 1.0);
  balance[net.index_of(sink)].push_back({withdraw, 1.0});
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const int v = prog.add_variable("source_" + std::to_string(s), 0.0, sources[s].capacity);
    balance[net.index_of(sources[s].bus)].push_back({v, -1.0});
  }
  std::vector<int> angle(n);
  for (std::size_t i = 0; i < n; ++i) {
    angle[i] = prog.add_variable("angle_" + std::to_string(net.buses()[i].id), -lp::kInf, lp::kInf);
  }
  for (std::size_t k = 0; k < net.num_lines(); ++k) {
    const Line& l = net.lines()[k];
    const std::size_t a = net.index_of(l.from_bus);
    const std::size_t b = net.index_of(l.to_bus);
    balance[a].push_back({angle[a], l.susceptance});
    balance[a].push_back({angle[b], -l.susceptance});
    balance[b].push_back({angle[b], l.susceptance});
    balance[b].push_back({angle[a], -l.susceptance});
    if (std::isfinite(l.flow_min) || std::isfinite(l.flow_max)) {
      prog.add_constraint("flow_" + std::to_string(k), l.flow_min, l.flow_max,
                          {{angle[a], l.susceptance}, {angle[b], -l.susceptance}});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    prog.add_equality("balance_" + std::to_string(net.buses()[i].id), 0.0, std::move(balance[i]));
  }
  prog.add_equality("reference_angle", 0.0, {{angle[net.index_of(net.reference_bus())], 1.0}});

  const lp::LPSolution sol = lp::solve(prog);
  if (!sol.optimal()) {
    throw std::runtime_error(std::string("max_deliverable: LP ") + std::string(lp::to_string(sol.status)));
  }
  return sol.primal[withdraw];
}

}  // namespace gridclear
