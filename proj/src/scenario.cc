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

#include "gridclear/scenario.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gridclear {

std::map<std::string, double> default_emission_factors() {
  return {{"coal", 1000.0}, {"gas", 500.0}, {"ng", 500.0},   {"oil", 800.0},
          {"nuclear", 5.0}, {"hydro", 10.0}, {"wind", 12.0}, {"solar", 45.0}};
}

ValidationReport ScenarioConfig::validate() const {
  ValidationReport r;
  if (!(target_res_share >= 0.0 && target_res_share <= 1.0)) {
    r.add("invalid share", "target_res_share must lie in [0, 1]");
  }
  if (!(alpha_std >= 0.0) || !std::isfinite(alpha_std)) {
    r.add("invalid alpha", "alpha_std must be finite and nonnegative");
  }
  if (!std::isfinite(alpha_mean)) r.add("invalid alpha", "alpha_mean must be finite");
  if (!(homes_per_mw > 0.0) || !std::isfinite(homes_per_mw)) {
    r.add("invalid homes", "homes_per_mw must be positive");
  }
  for (const auto& [fuel, f] : emission_factors) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      r.add("negative emission factor", "emission factor for '" + fuel + "' is invalid");
    }
  }
  return r;
}

OrderBook scale_res(const Network& net, const OrderBook& book, double target_share) {
  if (!(target_share > 0.0 && target_share < 1.0)) {
    throw std::invalid_argument("scale_res: target share must lie in (0, 1)");
  }
  if (const auto report = validate_orderbook(book, net); !report.ok()) {
    throw std::invalid_argument("scale_res: " + report.findings().front().message);
  }
  const double green = total_capacity(book, CapacityClass::kGreen);
  const double black = total_capacity(book, CapacityClass::kBlack);
  if (!(green > 0.0) || !(black > 0.0)) {
    throw std::invalid_argument("scale_res: both classes need positive capacity");
  }
  const double total = green + black;
  auto factor = [](double f) { return std::abs(f - 1.0) <= 1e-12 ? 1.0 : f; };
  const double fg = factor(target_share * total / green);
  const double fb = factor((1.0 - target_share) * total / black);
  OrderBook out = book;
  for (auto& g : out.generators) {
    const double f = g.energy_class == EnergyClass::kGreen ? fg : fb;
    for (auto& b : g.blocks) {
      b.quantity_min *= f;
      b.quantity_max *= f;
    }
  }
  return out;
}

std::vector<double> sample_alphas(const std::vector<Load>& loads, double mean, double std,
                                  std::uint64_t seed) {
  if (!(std >= 0.0)) throw std::invalid_argument("sample_alphas: std must be nonnegative");
  std::vector<std::size_t> order(loads.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return loads[a].id < loads[b].id; });
  std::vector<double> alphas(loads.size(), std::max(mean, 0.0));
  if (std == 0.0) return alphas;
  if (mean < -10.0 * std) {
    throw std::invalid_argument("sample_alphas: distribution has almost no nonnegative mass");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mean, std);
  for (std::size_t idx : order) {
    double a = dist(rng);
    while (a < 0.0) a = dist(rng);
    alphas[idx] = a;
  }
  return alphas;
}

DispatchDelta dispatch_delta(const ClearingSolution& standard, const DpdSolution& dpd,
                             const OrderBook& book) {
  const std::size_t n = book.generators.size();
  if (standard.generator_dispatch.size() != n || dpd.generator_dispatch.size() != n ||
      standard.load_service.size() != dpd.load_service.size()) {
    throw std::invalid_argument("dispatch_delta: solutions do not belong to the same instance");
  }
  DispatchDelta d;
  d.delta_green = dpd.total_dispatch(book, EnergyClass::kGreen) -
                  standard.total_dispatch(book, EnergyClass::kGreen);
  d.delta_black = dpd.total_dispatch(book, EnergyClass::kBlack) -
                  standard.total_dispatch(book, EnergyClass::kBlack);
  return d;
}

std::optional<double> emissions_report(const ClearingSolution& sol, const OrderBook& book) {
  const double served = sol.total_served();
  if (!(served > 0.0)) return std::nullopt;
  double kg = 0.0;
  for (std::size_t k = 0; k < book.generators.size(); ++k) {
    kg += sol.generator_total(k) * book.generators[k].emission_factor;
  }
  return kg / served;
}

long long homes_powered(double delta_green, double homes_per_mw) {
  if (!(delta_green >= 0.0) || !(homes_per_mw >= 0.0)) {
    throw std::invalid_argument("homes_powered: inputs must be nonnegative");
  }
  return static_cast<long long>(std::floor(delta_green * homes_per_mw));
}

void apply_emission_factors(OrderBook& book, const std::map<std::string, double>& factors) {
  for (auto& g : book.generators) {
    if (auto it = factors.find(g.fuel); it != factors.end()) g.emission_factor = it->second;
  }
}

namespace {

SettlementSummary summarize(const Settlement& s) {
  return {s.total_payment, s.total_revenue, s.merchandising_surplus};
}

}  // namespace

ScenarioReport compare_clearings(const Network& net, const OrderBook& book,
                                 const std::vector<double>& alphas,
                                 const ScenarioConfig& config) {
  if (alphas.size() != book.loads.size()) {
    throw std::invalid_argument("compare_clearings: one premium per load required");
  }
  ScenarioReport r;
  const double total = total_capacity(book, CapacityClass::kAll);
  r.res_share = total > 0.0 ? total_capacity(book, CapacityClass::kGreen) / total : 0.0;

  const ClearingSolution before = clear_standard(net, book, config.clearing);
  OrderBook priced = book;
  for (std::size_t i = 0; i < priced.loads.size(); ++i) priced.loads[i].alpha = alphas[i];
  const DpdSolution after = clear_dpd(net, priced, config.clearing);

  const DispatchDelta delta = dispatch_delta(before, after, book);
  r.delta_green = delta.delta_green;
  r.delta_black = delta.delta_black;
  r.lambda_green = after.lambda_green;
  r.congested_before = static_cast<int>(before.congested_lines.size());
  r.congested_after = static_cast<int>(after.congested_lines.size());
  r.avg_emissions_before = emissions_report(before, book);
  r.avg_emissions_after = emissions_report(after, book);
  r.homes_powered = homes_powered(std::max(0.0, r.delta_green), config.homes_per_mw);
  r.served_before = before.total_served();
  r.served_after = after.total_served();
  r.settlement_before = summarize(settle(before, net, book));
  r.settlement_after = summarize(settle(after, net, priced));
  return r;
}

ScenarioReport run_scenario(const Network& net, const OrderBook& book,
                            const ScenarioConfig& config) {
  return compare_clearings(
      net, book, sample_alphas(book.loads, config.alpha_mean, config.alpha_std, config.rng_seed),
      config);
}

std::vector<ScenarioReport> res_sweep(const Network& net, const OrderBook& book,
                                      const ScenarioConfig& config,
                                      const std::vector<double>& shares) {
  auto item = [&](double share) {
    return run_scenario(net, scale_res(net, book, share), config);
  };
  std::vector<ScenarioReport> out;
  out.reserve(shares.size());
  if (!config.parallel) {
    for (double s : shares) out.push_back(item(s));
    return out;
  }
  std::vector<std::future<ScenarioReport>> jobs;
  for (double s : shares) jobs.push_back(std::async(std::launch::async, item, s));
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace gridclear
