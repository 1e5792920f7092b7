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

#ifndef GRIDCLEAR_ORDERBOOK_H_
#define GRIDCLEAR_ORDERBOOK_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridclear/grid.h"
#include "gridclear/validation.h"

namespace gridclear {

enum class EnergyClass { kGreen, kBlack };

std::string_view to_string(EnergyClass c);
std::optional<EnergyClass> parse_energy_class(std::string_view text);

struct OfferBlock {
  double quantity_min = 0.0;  // MWh
  double quantity_max = 0.0;  // MWh
  double price = 0.0;         // $/MWh
};

struct Generator {
  std::string id;
  BusId bus = 0;
  EnergyClass energy_class = EnergyClass::kBlack;
  std::vector<OfferBlock> blocks;  // merit order, prices nondecreasing
  double emission_factor = 0.0;    // kg CO2e/MWh
  std::string fuel;                // informational, may be empty

  double capacity() const;
};

struct BidBlock {
  double quantity_min = 0.0;  // MWh
  double quantity_max = 0.0;  // MWh
  double value = 0.0;         // $/MWh
};

struct Load {
  std::string id;
  BusId bus = 0;
  std::vector<BidBlock> blocks;  // values nonincreasing
  double alpha = 0.0;            // uniform green premium, $/MWh

  double capacity() const;
  double minimum() const;
};

struct OrderBook {
  std::vector<Generator> generators;
  std::vector<Load> loads;
};

enum class CapacityClass { kGreen, kBlack, kAll };

ValidationReport validate_orderbook(const OrderBook& book, const Network& net);

// Sum of quantity_max over every block of every generator in the class.
double total_capacity(const OrderBook& book, CapacityClass which);

}  // namespace gridclear

#endif  // GRIDCLEAR_ORDERBOOK_H_
