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

// DC power flow network model.
//
// Units: susceptance is expressed in MW per radian, so the flow on a line is
// simply susceptance * (angle_from - angle_to). Importers convert per-unit
// reactance x on a system base S to susceptance S / x.

#ifndef GRIDCLEAR_GRID_H_
#define GRIDCLEAR_GRID_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridclear/validation.h"

namespace gridclear {

using BusId = int;

struct Coordinates {
  double latitude = 0.0;
  double longitude = 0.0;
};

struct Bus {
  BusId id = 0;
  std::string name;
  std::optional<Coordinates> coordinates;
};

struct Line {
  BusId from_bus = 0;
  BusId to_bus = 0;
  double susceptance = 0.0;  // MW/rad
  double flow_min = 0.0;     // MW, may be -inf
  double flow_max = 0.0;     // MW, may be +inf
};

// Symmetric limits from a single thermal rating. A rating of +inf (or any
// non-finite value) leaves the line unlimited.
Line make_line(BusId from, BusId to, double susceptance, double rating);

// Immutable after construction. The constructor only indexes the inputs;
// invariant checking is left to validate_network() so that malformed cases
// can be reported rather than thrown.
class Network {
 public:
  Network() = default;
  Network(std::vector<Bus> buses, std::vector<Line> lines,
          BusId reference_bus);

  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  BusId reference_bus() const { return reference_bus_; }
  std::size_t num_buses() const { return buses_.size(); }
  std::size_t num_lines() const { return lines_.size(); }

  std::optional<std::size_t> bus_index(BusId id) const;
  // Throws std::out_of_range for unknown ids.
  std::size_t index_of(BusId id) const;

  // Same topology with every flow limit removed.
  Network copper_plate() const;

 private:
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  BusId reference_bus_ = 0;
  std::unordered_map<BusId, std::size_t> index_;
};

ValidationReport validate_network(const Network& net);

// Flow on each line, oriented from from_bus to to_bus. `angles` is indexed
// like net.buses(); throws std::invalid_argument if its size differs.
std::vector<double> dc_flows(const Network& net, std::span<const double> angles);

// Net injection at each bus implied by a set of line flows.
std::vector<double> bus_injections(const Network& net,
                                   std::span<const double> flows);

// Solves the lossless DC power flow for a balanced injection vector (MW per
// bus, same indexing as buses()). The reference bus angle is zero. Throws
// std::invalid_argument when injections do not sum to zero or the network
// is disconnected.
std::vector<double> solve_angles(const Network& net,
                                 std::span<const double> injections);

struct Source {
  BusId bus = 0;
  double capacity = 0.0;  // MW
};

// Maximum MW deliverable to `sink` from `sources` alone, respecting DC flow
// and line limits. Solved as an auxiliary LP. Throws std::runtime_error if
// the LP cannot be solved to optimality.
double max_deliverable(const Network& net, std::span<const Source> sources,
                       BusId sink);

}  // namespace gridclear

#endif  // GRIDCLEAR_GRID_H_
