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

#include "gridclear/meritorder.h"

#include <algorithm>
#include <limits>
#include <string>
#include <tuple>

#include "gridclear/format.h"

namespace gridclear {
namespace {

struct Entry {
  double price;
  std::string id;
  double quantity;
  bool green;
};

StepCurve aggregate(std::vector<Entry> entries, CurveKind kind) {
  std::stable_sort(entries.begin(), entries.end(), [kind](const Entry& a, const Entry& b) {
    if (a.price != b.price) {
      return kind == CurveKind::kSupply ? a.price < b.price : a.price > b.price;
    }
    return a.id < b.id;
  });
  StepCurve curve;
  curve.kind = kind;
  double cumulative = 0.0;
  for (const Entry& e : entries) {
    if (!(e.quantity > 0.0)) continue;
    cumulative += e.quantity;
    if (!curve.steps.empty() && curve.steps.back().price == e.price) {
      curve.steps.back().cumulative_quantity = cumulative;
      if (e.green) curve.steps.back().green_quantity += e.quantity;
    } else {
      curve.steps.push_back({cumulative, e.price, e.green ? e.quantity : 0.0});
    }
  }
  return curve;
}

}  // namespace

double StepCurve::width(std::size_t i) const {
  return steps[i].cumulative_quantity - (i == 0 ? 0.0 : steps[i - 1].cumulative_quantity);
}

StepCurve build_supply_curve(const OrderBook& book) {
  std::vector<Entry> entries;
  for (const auto& g : book.generators) {
    for (const auto& b : g.blocks) {
      entries.push_back({b.price, g.id, b.quantity_max, g.energy_class == EnergyClass::kGreen});
    }
  }
  return aggregate(std::move(entries), CurveKind::kSupply);
}

StepCurve build_demand_curve(const OrderBook& book) {
  std::vector<Entry> entries;
  for (const auto& l : book.loads) {
    for (const auto& b : l.blocks) entries.push_back({b.value, l.id, b.quantity_max, false});
  }
  return aggregate(std::move(entries), CurveKind::kDemand);
}

bool is_valid(const StepCurve& curve) {
  for (std::size_t i = 0; i < curve.steps.size(); ++i) {
    const Step& s = curve.steps[i];
    if (!(curve.width(i) > 0.0)) return false;
    if (s.green_quantity < 0.0 || s.green_quantity > curve.width(i) * (1.0 + 1e-12)) return false;
    if (i > 0) {
      const double prev = curve.steps[i - 1].price;
      if (curve.kind == CurveKind::kSupply ? s.price <= prev : s.price >= prev) return false;
    }
  }
  return true;
}

Intersection intersect(const StepCurve& supply, const StepCurve& demand) {
  Intersection out;
  const std::size_t ns = supply.steps.size();
  const std::size_t nd = demand.steps.size();
  std::size_t i = 0, j = 0;
  double s_left = ns ? supply.width(0) : 0.0;
  double d_left = nd ? demand.width(0) : 0.0;
  std::size_t last_i = 0, last_j = 0;
  double green = 0.0;
  while (i < ns && j < nd && supply.steps[i].price <= demand.steps[j].price) {
    const double q = std::min(s_left, d_left);
    out.volume += q;
    green += q * supply.steps[i].green_quantity / supply.width(i);
    last_i = i;
    last_j = j;
    s_left -= q;
    d_left -= q;
    if (s_left <= 0.0 && ++i < ns) s_left = supply.width(i);
    if (d_left <= 0.0 && ++j < nd) d_left = demand.width(j);
  }
  if (out.volume <= 0.0) return out;

  out.defined = true;
  out.green_share = green / out.volume;
  const bool s_partial = i < ns && s_left < supply.width(i);
  const bool d_partial = j < nd && d_left < demand.width(j);
  if (s_partial) {
    out.price_low = out.price_high = supply.steps[i].price;
  } else if (d_partial) {
    out.price_low = out.price_high = demand.steps[j].price;
  } else {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    out.price_low = std::max(supply.steps[last_i].price, j < nd ? demand.steps[j].price : -kInf);
    out.price_high = std::min(demand.steps[last_j].price, i < ns ? supply.steps[i].price : kInf);
  }
  out.degenerate = out.price_low < out.price_high;
  out.price = 0.5 * (out.price_low + out.price_high);
  return out;
}

void write_curve_csv(std::ostream& out, const StepCurve& curve) {
  out << "cumulative_mwh,price\n";
  double left = 0.0;
  for (const Step& s : curve.steps) {
    out << format_number(left) << ',' << format_number(s.price) << '\n';
    out << format_number(s.cumulative_quantity) << ',' << format_number(s.price) << '\n';
    left = s.cumulative_quantity;
  }
}

}  // namespace gridclear
