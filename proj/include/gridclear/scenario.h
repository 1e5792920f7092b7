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

// Experiments: renewable-share scaling, green premium sampling, and the
// before/after comparison of standard and dual-pricing clearing.

#ifndef GRIDCLEAR_SCENARIO_H_
#define GRIDCLEAR_SCENARIO_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridclear/clearing.h"
#include "gridclear/grid.h"
#include "gridclear/orderbook.h"
#include "gridclear/validation.h"

namespace gridclear {

// kg CO2e/MWh by fuel name.
std::map<std::string, double> default_emission_factors();

struct ScenarioConfig {
  double target_res_share = 0.5;
  double alpha_mean = 5.0;  // $/MWh
  double alpha_std = 1.0;   // $/MWh
  std::uint64_t rng_seed = 1;
  std::map<std::string, double> emission_factors = default_emission_factors();
  double homes_per_mw = 800.0;
  ClearingOptions clearing;
  bool parallel = true;  // evaluate sweep items concurrently

  ValidationReport validate() const;
};

struct SettlementSummary {
  double total_payment = 0.0;
  double total_revenue = 0.0;
  double merchandising_surplus = 0.0;
};

struct ScenarioReport {
  double res_share = 0.0;  // green capacity / total capacity of the cleared book
  double delta_green = 0.0;   // MWh
  double delta_black = 0.0;   // MWh
  double lambda_green = 0.0;  // $/MWh
  int congested_before = 0;
  int congested_after = 0;
  std::optional<double> avg_emissions_before;  // kg CO2e/MWh
  std::optional<double> avg_emissions_after;
  long long homes_powered = 0;
  double served_before = 0.0;  // MWh
  double served_after = 0.0;
  SettlementSummary settlement_before;
  SettlementSummary settlement_after;
};

// Class-uniform scaling of block quantities so that green capacity equals
// `target_share` of the unchanged total. Throws std::invalid_argument when
// the target is outside (0, 1), the book does not fit the network, or a
// class with zero capacity would have to grow.
OrderBook scale_res(const Network& net, const OrderBook& book, double target_share);

// One draw per load from Normal(mean, std) with negative draws redrawn.
// Draws are handed out in ascending load-id order; the result is indexed
// like `loads`.
std::vector<double> sample_alphas(const std::vector<Load>& loads, double mean, double std,
                                  std::uint64_t seed);

struct DispatchDelta {
  double delta_green = 0.0;
  double delta_black = 0.0;
};

// DPD minus standard dispatch per class. Throws std::invalid_argument when
// the solutions do not match the book's shape.
DispatchDelta dispatch_delta(const ClearingSolution& standard, const DpdSolution& dpd,
                             const OrderBook& book);

// Emission-weighted generation per MWh served; empty when nothing is served.
std::optional<double> emissions_report(const ClearingSolution& sol, const OrderBook& book);

// floor(delta_green * homes_per_mw). Throws std::invalid_argument on negative input.
long long homes_powered(double delta_green, double homes_per_mw);

// Sets each generator's emission factor from its fuel when the fuel is listed.
void apply_emission_factors(OrderBook& book, const std::map<std::string, double>& factors);

// Clears `book` with the standard model, then with the dual-pricing model
// after giving load i the premium `alphas[i]`.
ScenarioReport compare_clearings(const Network& net, const OrderBook& book,
                                 const std::vector<double>& alphas,
                                 const ScenarioConfig& config);

// compare_clearings with premiums drawn by sample_alphas from `config`.
ScenarioReport run_scenario(const Network& net, const OrderBook& book,
                            const ScenarioConfig& config);

// For each share: scale_res, sample premiums with the configured seed, clear
// both ways. Reports come back in the order of `shares`.
std::vector<ScenarioReport> res_sweep(const Network& net, const OrderBook& book,
                                      const ScenarioConfig& config,
                                      const std::vector<double>& shares);

}  // namespace gridclear

#endif  // GRIDCLEAR_SCENARIO_H_
