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

// Market clearing on a DC network.
//
// The standard clearing maximizes bid value minus offer cost subject to nodal
// balance, line limits and block bounds. Dual-pricing dispatch (DPD) splits
// each load's service into a green and a black part, rewards the green part
// with the load's premium alpha, and adds one system-wide row that keeps
// green allocations within green generation.
//
// Prices: the nodal balance row at bus n is written as
//   sum(load blocks at n) + sum(flows leaving n) - sum(generation at n) = 0
// so its dual is the value of a free MW injected at n, i.e. the price an
// incremental withdrawal pays (black LMP). The green balance row
//   sum(green allocations) - sum(green generation) <= 0
// has dual lambda_green >= 0, and green LMP = black LMP + lambda_green.
// Reported allocations always meet the row with equality.

#ifndef GRIDCLEAR_CLEARING_H_
#define GRIDCLEAR_CLEARING_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridclear/grid.h"
#include "gridclear/lp.h"
#include "gridclear/orderbook.h"

namespace gridclear {

struct ClearingOptions {
  lp::Tolerances tolerances;
  double tol_congest = 1e-5;  // MW
};

// Thrown when the clearing LP does not reach optimality.
class ClearingError : public std::runtime_error {
 public:
  ClearingError(const std::string& what, lp::Status status)
      : std::runtime_error(what), status_(status) {}
  lp::Status status() const { return status_; }

 private:
  lp::Status status_;
};

// The LP plus the index maps needed to read a solution back.
struct ClearingModel {
  lp::LinearProgram lp;
  std::vector<std::vector<int>> generator_vars;  // [generator][block]
  std::vector<std::vector<int>> load_vars;       // [load][block]
  std::vector<int> angle_vars;                   // per bus
  std::vector<int> balance_rows;                 // per bus
  std::vector<int> line_rows;                    // per line
  int reference_row = -1;
  // Dual-pricing dispatch only; empty / -1 for the standard model.
  std::vector<int> green_vars;  // per load
  std::vector<int> black_vars;  // per load
  std::vector<int> split_rows;  // per load
  int green_balance_row = -1;
};

ClearingModel build_standard_clearing(const Network& net, const OrderBook& book);
ClearingModel build_dpd_clearing(const Network& net, const OrderBook& book);

struct ClearingSolution {
  std::vector<std::vector<double>> generator_dispatch;  // MWh [gen][block]
  std::vector<std::vector<double>> load_service;        // MWh [load][block]
  std::vector<double> angles;                           // rad, per bus
  std::vector<double> flows;                            // MW, per line
  std::vector<double> black_lmp;                        // $/MWh, per bus
  double objective = 0.0;                               // $
  std::vector<std::size_t> congested_lines;
  lp::LPSolution raw;

  double generator_total(std::size_t k) const;
  double load_total(std::size_t i) const;
  double total_served() const;
  double total_dispatch(const OrderBook& book, EnergyClass c) const;
};

struct DpdSolution : ClearingSolution {
  std::vector<double> green_allocation;  // MWh per load
  std::vector<double> black_allocation;  // MWh per load
  double lambda_green = 0.0;             // $/MWh
  std::vector<double> green_lmp;         // $/MWh, per bus
};

ClearingSolution clear_standard(const Network& net, const OrderBook& book,
                                const ClearingOptions& options = {});
DpdSolution clear_dpd(const Network& net, const OrderBook& book,
                      const ClearingOptions& options = {});

// Lines whose flow lies within `tol_congest` of a finite limit.
std::vector<std::size_t> congested_lines(const Network& net,
                                         const std::vector<double>& flows,
                                         double tol_congest);
inline std::vector<std::size_t> congested_lines(const Network& net,
                                                const ClearingSolution& sol,
                                                double tol_congest) {
  return congested_lines(net, sol.flows, tol_congest);
}

struct Settlement {
  std::vector<double> load_payment;        // $ per load
  std::vector<double> generator_revenue;   // $ per generator
  double total_payment = 0.0;
  double total_revenue = 0.0;
  double merchandising_surplus = 0.0;      // payments - revenues
};

// Loads pay black LMP on their black share and green LMP on their green
// share; green generators are paid the green LMP, black generators the black
// LMP, each at their own bus.
Settlement settle(const DpdSolution& sol, const Network& net, const OrderBook& book);
// Single-price settlement at the black LMP.
Settlement settle(const ClearingSolution& sol, const Network& net, const OrderBook& book);

}  // namespace gridclear

#endif  // GRIDCLEAR_CLEARING_H_
