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

#include "gridclear/clearing.h"

#include <cmath>
#include <string>

namespace gridclear {
namespace {

std::string bus_key(BusId id) { return std::to_string(id); }

void build_network_rows(const Network& net, const OrderBook& book,
                        ClearingModel* model) {
  lp::LinearProgram& lp = model->lp;
  const std::size_t n = net.num_buses();
  std::vector<std::vector<lp::Term>> balance(n);

  model->load_vars.resize(book.loads.size());
  for (std::size_t i = 0; i < book.loads.size(); ++i) {
    const Load& load = book.loads[i];
    const std::size_t bus = net.index_of(load.bus);
    for (std::size_t j = 0; j < load.blocks.size(); ++j) {
      const BidBlock& b = load.blocks[j];
      const std::string name = "load_" + load.id + "_b" + std::to_string(j);
      const int v = lp.add_variable(name, b.quantity_min, b.quantity_max, b.value);
      lp.tag("load:" + load.id + ":block:" + std::to_string(j), name);
      model->load_vars[i].push_back(v);
      balance[bus].push_back({v, 1.0});
    }
  }
  model->generator_vars.resize(book.generators.size());
  for (std::size_t k = 0; k < book.generators.size(); ++k) {
    const Generator& gen = book.generators[k];
    const std::size_t bus = net.index_of(gen.bus);
    for (std::size_t l = 0; l < gen.blocks.size(); ++l) {
      const OfferBlock& b = gen.blocks[l];
      const std::string name = "gen_" + gen.id + "_b" + std::to_string(l);
      const int v = lp.add_variable(name, b.quantity_min, b.quantity_max, -b.price);
      lp.tag("generator:" + gen.id + ":block:" + std::to_string(l), name);
      model->generator_vars[k].push_back(v);
      balance[bus].push_back({v, -1.0});
    }
  }
  model->angle_vars.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    const std::string name = "angle_" + bus_key(net.buses()[b].id);
    model->angle_vars[b] = lp.add_variable(name, -lp::kInf, lp::kInf, 0.0);
    lp.tag("angle:" + bus_key(net.buses()[b].id), name);
  }

  model->line_rows.resize(net.num_lines());
  for (std::size_t k = 0; k < net.num_lines(); ++k) {
    const Line& line = net.lines()[k];
    const std::size_t a = net.index_of(line.from_bus);
    const std::size_t b = net.index_of(line.to_bus);
    const int ta = model->angle_vars[a];
    const int tb = model->angle_vars[b];
    balance[a].push_back({ta, line.susceptance});
    balance[a].push_back({tb, -line.susceptance});
    balance[b].push_back({tb, line.susceptance});
    balance[b].push_back({ta, -line.susceptance});
    const std::string name = "flow_" + std::to_string(k);
    model->line_rows[k] = lp.add_constraint(
        name, line.flow_min, line.flow_max, {{ta, line.susceptance}, {tb, -line.susceptance}});
    lp.tag("line:" + std::to_string(k), name);
  }

  model->balance_rows.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    const std::string name = "balance_" + bus_key(net.buses()[b].id);
    model->balance_rows[b] = lp.add_equality(name, 0.0, std::move(balance[b]));
    lp.tag("bus:" + bus_key(net.buses()[b].id), name);
  }
  model->reference_row = lp.add_equality(
      "reference_angle", 0.0, {{model->angle_vars[net.index_of(net.reference_bus())], 1.0}});
  lp.tag("reference", "reference_angle");
}

void require_optimal(const lp::LPSolution& sol, const char* what) {
  if (!sol.optimal()) {
    throw ClearingError(std::string(what) + ": LP " + std::string(lp::to_string(sol.status)),
                        sol.status);
  }
}

void extract_common(const Network& net, const ClearingModel& model,
                    const ClearingOptions& options, lp::LPSolution raw,
                    ClearingSolution* out) {
  out->generator_dispatch.resize(model.generator_vars.size());
  for (std::size_t k = 0; k < model.generator_vars.size(); ++k) {
    for (int v : model.generator_vars[k]) out->generator_dispatch[k].push_back(raw.primal[v]);
  }
  out->load_service.resize(model.load_vars.size());
  for (std::size_t i = 0; i < model.load_vars.size(); ++i) {
    for (int v : model.load_vars[i]) out->load_service[i].push_back(raw.primal[v]);
  }
  out->angles.resize(model.angle_vars.size());
  for (std::size_t b = 0; b < model.angle_vars.size(); ++b) {
    out->angles[b] = raw.primal[model.angle_vars[b]];
  }
  out->flows.resize(model.line_rows.size());
  for (std::size_t k = 0; k < model.line_rows.size(); ++k) {
    out->flows[k] = raw.row_activity[model.line_rows[k]];
  }
  out->black_lmp.resize(model.balance_rows.size());
  for (std::size_t b = 0; b < model.balance_rows.size(); ++b) {
    out->black_lmp[b] = raw.duals[model.balance_rows[b]];
  }
  out->objective = raw.objective_value;
  out->congested_lines = congested_lines(net, out->flows, options.tol_congest);
  out->raw = std::move(raw);
}

}  // namespace

ClearingModel build_standard_clearing(const Network& net, const OrderBook& book) {
  ClearingModel model;
  build_network_rows(net, book, &model);
  return model;
}

ClearingModel build_dpd_clearing(const Network& net, const OrderBook& book) {
  ClearingModel model;
  build_network_rows(net, book, &model);
  lp::LinearProgram& lp = model.lp;

  std::vector<lp::Term> green_balance;
  const std::size_t nl = book.loads.size();
  model.green_vars.resize(nl);
  model.black_vars.resize(nl);
  model.split_rows.resize(nl);
  for (std::size_t i = 0; i < nl; ++i) {
    const Load& load = book.loads[i];
    const double cap = load.capacity();
    const std::string gname = "green_" + load.id;
    const std::string bname = "black_" + load.id;
    model.green_vars[i] = lp.add_variable(gname, 0.0, cap, load.alpha);
    model.black_vars[i] = lp.add_variable(bname, 0.0, cap, 0.0);
    lp.tag("load:" + load.id + ":green", gname);
    lp.tag("load:" + load.id + ":black", bname);
    std::vector<lp::Term> split = {{model.green_vars[i], 1.0}, {model.black_vars[i], 1.0}};
    for (int v : model.load_vars[i]) split.push_back({v, -1.0});
    const std::string sname = "split_" + load.id;
    model.split_rows[i] = lp.add_equality(sname, 0.0, std::move(split));
    lp.tag("load:" + load.id + ":split", sname);
    green_balance.push_back({model.green_vars[i], 1.0});
  }
  for (std::size_t k = 0; k < book.generators.size(); ++k) {
    if (book.generators[k].energy_class != EnergyClass::kGreen) continue;
    for (int v : model.generator_vars[k]) green_balance.push_back({v, -1.0});
  }
  // Posed as "<= 0": labelling served energy green never lowers welfare, so
  // the optimum is unchanged and the row's dual is nonnegative.
  model.green_balance_row =
      lp.add_constraint("green_balance", -lp::kInf, 0.0, std::move(green_balance));
  lp.tag("green-balance", "green_balance");
  return model;
}

ClearingSolution clear_standard(const Network& net, const OrderBook& book,
                                const ClearingOptions& options) {
  const ClearingModel model = build_standard_clearing(net, book);
  lp::LPSolution raw = lp::solve(model.lp, options.tolerances);
  require_optimal(raw, "standard clearing");
  ClearingSolution sol;
  extract_common(net, model, options, std::move(raw), &sol);
  return sol;
}

DpdSolution clear_dpd(const Network& net, const OrderBook& book,
                      const ClearingOptions& options) {
  const ClearingModel model = build_dpd_clearing(net, book);
  lp::LPSolution raw = lp::solve(model.lp, options.tolerances);
  require_optimal(raw, "dual-pricing clearing");
  DpdSolution sol;
  sol.lambda_green = raw.duals[model.green_balance_row];
  for (std::size_t i = 0; i < model.green_vars.size(); ++i) {
    sol.green_allocation.push_back(raw.primal[model.green_vars[i]]);
    sol.black_allocation.push_back(raw.primal[model.black_vars[i]]);
  }
  // Green output left unlabelled can only sit with zero-premium loads;
  // relabel it so allocations add up to green generation.
  double surplus = -raw.row_activity[model.green_balance_row];
  for (std::size_t i = 0; i < sol.green_allocation.size() && surplus > 0.0; ++i) {
    const double move = std::min(surplus, sol.black_allocation[i]);
    sol.green_allocation[i] += move;
    sol.black_allocation[i] -= move;
    surplus -= move;
  }
  extract_common(net, model, options, std::move(raw), &sol);
  sol.green_lmp.resize(sol.black_lmp.size());
  for (std::size_t b = 0; b < sol.black_lmp.size(); ++b) {
    sol.green_lmp[b] = sol.black_lmp[b] + sol.lambda_green;
  }
  return sol;
}

double ClearingSolution::generator_total(std::size_t k) const {
  double s = 0.0;
  for (double v : generator_dispatch.at(k)) s += v;
  return s;
}

double ClearingSolution::load_total(std::size_t i) const {
  double s = 0.0;
  for (double v : load_service.at(i)) s += v;
  return s;
}

double ClearingSolution::total_served() const {
  double s = 0.0;
  for (std::size_t i = 0; i < load_service.size(); ++i) s += load_total(i);
  return s;
}

double ClearingSolution::total_dispatch(const OrderBook& book, EnergyClass c) const {
  double s = 0.0;
  for (std::size_t k = 0; k < generator_dispatch.size(); ++k) {
    if (book.generators.at(k).energy_class == c) s += generator_total(k);
  }
  return s;
}

std::vector<std::size_t> congested_lines(const Network& net, const std::vector<double>& flows,
                                         double tol_congest) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < net.num_lines() && k < flows.size(); ++k) {
    const Line& l = net.lines()[k];
    const bool at_max = std::isfinite(l.flow_max) && std::abs(flows[k] - l.flow_max) <= tol_congest;
    const bool at_min = std::isfinite(l.flow_min) && std::abs(flows[k] - l.flow_min) <= tol_congest;
    if (at_max || at_min) out.push_back(k);
  }
  return out;
}

namespace {

Settlement settle_with(const ClearingSolution& sol, const Network& net, const OrderBook& book,
                       const std::vector<double>* green_alloc,
                       const std::vector<double>* black_alloc, double lambda_green) {
  Settlement s;
  s.load_payment.resize(book.loads.size());
  for (std::size_t i = 0; i < book.loads.size(); ++i) {
    const double black_price = sol.black_lmp[net.index_of(book.loads[i].bus)];
    if (green_alloc != nullptr) {
      s.load_payment[i] = black_price * (*black_alloc)[i] +
                          (black_price + lambda_green) * (*green_alloc)[i];
    } else {
      s.load_payment[i] = black_price * sol.load_total(i);
    }
    s.total_payment += s.load_payment[i];
  }
  s.generator_revenue.resize(book.generators.size());
  for (std::size_t k = 0; k < book.generators.size(); ++k) {
    const Generator& g = book.generators[k];
    double price = sol.black_lmp[net.index_of(g.bus)];
    if (g.energy_class == EnergyClass::kGreen) price += lambda_green;
    s.generator_revenue[k] = price * sol.generator_total(k);
    s.total_revenue += s.generator_revenue[k];
  }
  s.merchandising_surplus = s.total_payment - s.total_revenue;
  return s;
}

}  // namespace

Settlement settle(const DpdSolution& sol, const Network& net, const OrderBook& book) {
  return settle_with(sol, net, book, &sol.green_allocation, &sol.black_allocation,
                     sol.lambda_green);
}

Settlement settle(const ClearingSolution& sol, const Network& net, const OrderBook& book) {
  return settle_with(sol, net, book, nullptr, nullptr, 0.0);
}

}  // namespace gridclear
