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

#include "gridclear/orderbook.h"

#include <cmath>
#include <set>

namespace gridclear {

std::string_view to_string(EnergyClass c) {
  return c == EnergyClass::kGreen ? "green" : "black";
}

std::optional<EnergyClass> parse_energy_class(std::string_view text) {
  if (text == "green") return EnergyClass::kGreen;
  if (text == "black") return EnergyClass::kBlack;
  return std::nullopt;
}

double Generator::capacity() const {
  double total = 0.0;
  for (const auto& b : blocks) total += b.quantity_max;
  return total;
}

double Load::capacity() const {
  double total = 0.0;
  for (const auto& b : blocks) total += b.quantity_max;
  return total;
}

double Load::minimum() const {
  double total = 0.0;
  for (const auto& b : blocks) total += b.quantity_min;
  return total;
}

namespace {

bool valid_quantities(double lo, double hi) {
  return std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo <= hi;
}

}  // namespace

ValidationReport validate_orderbook(const OrderBook& book, const Network& net) {
  ValidationReport report;
  std::set<std::string> ids;

  for (const auto& g : book.generators) {
    const std::string who = "generator '" + g.id + "'";
    if (!ids.insert(g.id).second) report.add("duplicate participant", who + " id is not unique");
    if (!net.bus_index(g.bus)) {
      report.add("dangling bus", who + " is attached to unknown bus " + std::to_string(g.bus));
    }
    if (!(g.emission_factor >= 0.0) || !std::isfinite(g.emission_factor)) {
      report.add("negative emission factor", who + " has an invalid emission factor");
    }
    for (std::size_t b = 0; b < g.blocks.size(); ++b) {
      const auto& blk = g.blocks[b];
      if (!valid_quantities(blk.quantity_min, blk.quantity_max)) {
        report.add("invalid block bounds", who + " block " + std::to_string(b) +
                                               " needs 0 <= quantity_min <= quantity_max");
      }
      if (!std::isfinite(blk.price)) {
        report.add("non-finite price", who + " block " + std::to_string(b) + " price is not finite");
      }
      if (b > 0 && blk.price < g.blocks[b - 1].price) {
        report.add("non-monotone offer", who + " block prices must be nondecreasing");
      }
    }
  }

  for (const auto& l : book.loads) {
    const std::string who = "load '" + l.id + "'";
    if (!ids.insert(l.id).second) report.add("duplicate participant", who + " id is not unique");
    if (!net.bus_index(l.bus)) {
      report.add("dangling bus", who + " is attached to unknown bus " + std::to_string(l.bus));
    }
    if (!(l.alpha >= 0.0) || !std::isfinite(l.alpha)) {
      report.add("negative alpha", who + " green premium must be finite and nonnegative");
    }
    for (std::size_t b = 0; b < l.blocks.size(); ++b) {
      const auto& blk = l.blocks[b];
      if (!valid_quantities(blk.quantity_min, blk.quantity_max)) {
        report.add("invalid block bounds", who + " block " + std::to_string(b) +
                                               " needs 0 <= quantity_min <= quantity_max");
      }
      if (!std::isfinite(blk.value)) {
        report.add("non-finite price", who + " block " + std::to_string(b) + " value is not finite");
      }
      if (b > 0 && blk.value > l.blocks[b - 1].value) {
        report.add("non-monotone bid", who + " block values must be nonincreasing");
      }
    }
  }
  return report;
}

double total_capacity(const OrderBook& book, CapacityClass which) {
  double total = 0.0;
  for (const auto& g : book.generators) {
    const bool green = g.energy_class == EnergyClass::kGreen;
    if (which == CapacityClass::kAll || (which == CapacityClass::kGreen) == green) {
      total += g.capacity();
    }
  }
  return total;
}

}  // namespace gridclear
