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

// Copper-plate clearing by intersecting aggregated step curves.

#ifndef GRIDCLEAR_MERITORDER_H_
#define GRIDCLEAR_MERITORDER_H_

#include <ostream>
#include <vector>

#include "gridclear/orderbook.h"

namespace gridclear {

enum class CurveKind { kSupply, kDemand };

struct Step {
  double cumulative_quantity = 0.0;  // MWh at the right end of the step
  double price = 0.0;                // $/MWh
  double green_quantity = 0.0;       // MWh of this step offered by green blocks
};

struct StepCurve {
  CurveKind kind = CurveKind::kSupply;
  std::vector<Step> steps;

  double total_quantity() const {
    return steps.empty() ? 0.0 : steps.back().cumulative_quantity;
  }
  // Width of step `i`.
  double width(std::size_t i) const;
};

// Blocks with zero quantity_max are dropped; equal prices merge into one step.
StepCurve build_supply_curve(const OrderBook& book);
StepCurve build_demand_curve(const OrderBook& book);

// True when quantities strictly increase and prices follow the curve kind.
bool is_valid(const StepCurve& curve);

struct Intersection {
  double volume = 0.0;       // MWh
  double price = 0.0;        // $/MWh, meaningless unless `defined`
  double green_share = 0.0;  // fraction of `volume` from green blocks
  bool defined = false;      // false when nothing trades
  bool degenerate = false;   // clearing price not unique; `price` is the midpoint
  double price_low = 0.0;    // interval of market-clearing prices
  double price_high = 0.0;
};

// Trades while supply price <= demand value. If the last step traded on
// either side is only partly used the price is that step's price. Otherwise
// any price between the neighbouring steps clears the market and the
// midpoint is reported with `degenerate` set.
Intersection intersect(const StepCurve& supply, const StepCurve& demand);

// Plot-ready polyline: "cumulative_mwh,price" with two vertices per step.
void write_curve_csv(std::ostream& out, const StepCurve& curve);

}  // namespace gridclear

#endif  // GRIDCLEAR_MERITORDER_H_
