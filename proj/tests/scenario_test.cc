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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.h"
#include "gridclear/scenario.h"

namespace gridclear {
namespace {

testing::Instance twenty_eighty() {
  testing::Instance in;
  in.net = Network({{1, "a", {}}}, {}, 1);
  in.book.generators = {
      {"w", 1, EnergyClass::kGreen, {{0, 5, 0}, {0, 15, 1}}, 12, "wind"},
      {"c", 1, EnergyClass::kBlack, {{0, 80, 30}}, 1000, "coal"},
  };
  in.book.loads = {{"d", 1, {{0, 50, 40}}, 0}};
  return in;
}

// Copper plate where the premium adds green without touching black output.
testing::Instance green_only_gain() {
  testing::Instance in;
  in.net = Network({{1, "a", {}}}, {}, 1);
  in.book.generators = {
      {"solar", 1, EnergyClass::kGreen, {{0, 10, 5}}, 45, "solar"},
      {"gas", 1, EnergyClass::kBlack, {{0, 4, 3}}, 500, "gas"},
  };
  in.book.loads = {{"d", 1, {{0, 14, 4}}, 0}};
  return in;
}

// Congested four-bus mesh where the high-premium load sits next to a green
// unit that only helps if flows are rearranged. Found by random search.
testing::Instance premium_reroute() {
  testing::Instance in;
  in.net = Network({{1, "1", {}}, {2, "2", {}}, {3, "3", {}}, {4, "4", {}}},
                   {make_line(1, 2, 4.6403472012133866, 4.0536547167022992),
                    make_line(2, 3, 6.9519697022283609, testing::kUnlimited),
                    make_line(2, 4, 0.71566426436948771, 2.7672215591154941),
                    make_line(4, 1, 1.5278533578360529, 3.3690630644128152)},
                   1);
  in.book.generators = {
      {"g0", 3, EnergyClass::kGreen,
       {{0, 2.9284990542158207, 9.873023771734001}, {0, 3.9231410564548885, 11.714887750191719}},
       10, "wind"},
      {"g2", 3, EnergyClass::kGreen, {{0, 1.2480494887592626, 19.207896128252099}}, 10, "wind"},
      {"g3", 1, EnergyClass::kGreen,
       {{0, 4.0148785082580467, 11.855328874337214},
        {0, 3.3116676049566265, 13.241196552878339},
        {0, 3.4996614457305344, 15.466296172453724}},
       10, "wind"},
      {"g5", 2, EnergyClass::kBlack, {{0, 4.9260334894851443, 16.013109691731046}}, 800, "coal"},
      {"g6", 2, EnergyClass::kBlack, {{0, 3.0666037978319141, 3.3733803614679743}}, 800, "coal"},
      {"g7", 2, EnergyClass::kGreen, {{0, 1.4604831141029644, 19.327365498091133}}, 10, "wind"},
  };
  in.book.loads = {
      {"d1", 1,
       {{0, 5.3504828032275675, 36.675221722316095},
        {0, 2.5155147568006839, 32.533961120458954},
        {0, 4.7644623235812276, 31.980133758665843}},
       5.1947425447164433},
      {"d4", 4,
       {{0, 1.0571605990452744, 27.183433776692517}, {0, 4.1859177343586005, 26.02892274468331}},
       2.4401264855607487},
  };
  return in;
}

TEST_CASE("scale_res hits the target and keeps the total") {
  const auto in = twenty_eighty();
  const OrderBook scaled = scale_res(in.net, in.book, 0.5);
  CHECK(scaled.generators[0].blocks[0].quantity_max == doctest::Approx(12.5));
  CHECK(scaled.generators[0].blocks[1].quantity_max == doctest::Approx(37.5));
  CHECK(scaled.generators[1].blocks[0].quantity_max == doctest::Approx(50.0));
  CHECK(total_capacity(scaled, CapacityClass::kGreen) == doctest::Approx(50.0));
  CHECK(total_capacity(scaled, CapacityClass::kBlack) == doctest::Approx(50.0));
  CHECK(scaled.generators[0].blocks[1].price == 1.0);
  CHECK(scaled.generators[0].bus == 1);

  const OrderBook same = scale_res(in.net, in.book, 0.2);
  CHECK(same.generators[0].blocks[1].quantity_max == 15.0);
  CHECK(same.generators[1].blocks[0].quantity_max == 80.0);

  auto black_only = in;
  black_only.book.generators.erase(black_only.book.generators.begin());
  CHECK_THROWS_AS(scale_res(black_only.net, black_only.book, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(scale_res(in.net, in.book, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(scale_res(in.net, in.book, 0.0), std::invalid_argument);
}

TEST_CASE("scale_res on random books") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> share(0.05, 0.95);
  int scaled = 0;
  for (int t = 0; t < 200; ++t) {
    const auto in = testing::random_instance(rng);
    const double g = total_capacity(in.book, CapacityClass::kGreen);
    const double b = total_capacity(in.book, CapacityClass::kBlack);
    if (g == 0.0 || b == 0.0) continue;
    const double target = share(rng);
    const OrderBook out = scale_res(in.net, in.book, target);
    const double total = total_capacity(out, CapacityClass::kAll);
    CHECK(std::abs(total - (g + b)) <= 1e-9 * (g + b));
    CHECK(total_capacity(out, CapacityClass::kGreen) / total == doctest::Approx(target).epsilon(1e-9));
    ++scaled;
  }
  CHECK(scaled > 50);
}

TEST_CASE("sample_alphas") {
  std::vector<Load> loads(5);
  for (int i = 0; i < 5; ++i) loads[i].id = "l" + std::to_string(4 - i);
  for (double a : sample_alphas(loads, 5.0, 0.0, 9)) CHECK(a == 5.0);
  const auto a1 = sample_alphas(loads, 5.0, 1.0, 9);
  CHECK(a1 == sample_alphas(loads, 5.0, 1.0, 9));
  CHECK(a1 != sample_alphas(loads, 5.0, 1.0, 10));

  // Values follow the id, not the position.
  std::vector<Load> reversed(loads.rbegin(), loads.rend());
  const auto a2 = sample_alphas(reversed, 5.0, 1.0, 9);
  for (std::size_t i = 0; i < 5; ++i) CHECK(a2[i] == a1[4 - i]);

  std::vector<Load> many(10000);
  for (std::size_t i = 0; i < many.size(); ++i) many[i].id = std::to_string(i);
  const auto draws = sample_alphas(many, 5.0, 1.0, 2024);
  double sum = 0.0;
  for (double a : draws) {
    CHECK(a >= 0.0);
    sum += a;
  }
  CHECK(std::abs(sum / draws.size() - 5.0) < 0.05);

  // Heavy truncation still yields nonnegative draws.
  for (double a : sample_alphas(loads, -1.0, 1.0, 3)) CHECK(a >= 0.0);
}

TEST_CASE("dispatch_delta on the triangle") {
  const auto in = testing::three_bus(3.0);
  const ClearingSolution s = clear_standard(in.net, in.book);
  const DpdSolution d = clear_dpd(in.net, in.book);
  const DispatchDelta delta = dispatch_delta(s, d, in.book);
  CHECK(delta.delta_green == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(delta.delta_black == doctest::Approx(1.0).epsilon(1e-6));

  const auto zero = testing::three_bus(0.0);
  const DispatchDelta none =
      dispatch_delta(clear_standard(zero.net, zero.book), clear_dpd(zero.net, zero.book), zero.book);
  CHECK(std::abs(none.delta_green) < 1e-6);
  CHECK(std::abs(none.delta_black) < 1e-6);

  ClearingSolution bad = s;
  bad.generator_dispatch.pop_back();
  CHECK_THROWS_AS(dispatch_delta(bad, d, in.book), std::invalid_argument);
}

TEST_CASE("emissions_report") {
  OrderBook book;
  book.generators = {{"g", 1, EnergyClass::kGreen, {{0, 4, 0}}, 0.0, ""},
                     {"b", 1, EnergyClass::kBlack, {{0, 4, 0}}, 500.0, ""}};
  ClearingSolution sol;
  sol.generator_dispatch = {{4.0}, {1.0}};
  sol.load_service = {{5.0}};
  CHECK(*emissions_report(sol, book) == doctest::Approx(100.0));

  sol.generator_dispatch = {{5.0}, {0.0}};
  CHECK(*emissions_report(sol, book) == 0.0);

  sol.load_service = {{0.0}};
  sol.generator_dispatch = {{0.0}, {0.0}};
  CHECK_FALSE(emissions_report(sol, book).has_value());

  // Splitting a generator's output across blocks changes nothing.
  OrderBook split = book;
  split.generators[1].blocks = {{0, 0.5, 0}, {0, 3.5, 0}};
  ClearingSolution a, b;
  a.generator_dispatch = {{2.0}, {1.0}};
  a.load_service = {{3.0}};
  b.generator_dispatch = {{2.0}, {0.5, 0.5}};
  b.load_service = {{3.0}};
  CHECK(*emissions_report(a, book) == doctest::Approx(*emissions_report(b, split)));
}

TEST_CASE("homes_powered") {
  CHECK(homes_powered(239.0, 800.0) == 191200);
  CHECK(homes_powered(0.0, 800.0) == 0);
  CHECK(homes_powered(1.0, 800.0) == 800);
  CHECK_THROWS_AS(homes_powered(-1.0, 800.0), std::invalid_argument);
}

TEST_CASE("emissions do not rise when the premium only adds green") {
  const auto in = green_only_gain();
  ScenarioConfig config;
  config.alpha_mean = 3.0;
  config.alpha_std = 0.0;
  const ScenarioReport r = run_scenario(in.net, in.book, config);
  CHECK(r.delta_green == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(std::abs(r.delta_black) < 1e-6);
  REQUIRE(r.avg_emissions_before.has_value());
  REQUIRE(r.avg_emissions_after.has_value());
  CHECK(*r.avg_emissions_after <= *r.avg_emissions_before);
  CHECK(*r.avg_emissions_before == doctest::Approx(500.0));
  CHECK(*r.avg_emissions_after == doctest::Approx((4 * 500.0 + 10 * 45.0) / 14.0));
  CHECK(r.homes_powered == 8000);
}

TEST_CASE("res_sweep") {
  const auto in = twenty_eighty();
  ScenarioConfig config;
  config.alpha_mean = 5.0;
  config.alpha_std = 1.0;
  config.rng_seed = 77;
  CHECK(res_sweep(in.net, in.book, config, {}).empty());

  const auto one = res_sweep(in.net, in.book, config, {0.2});
  REQUIRE(one.size() == 1);
  CHECK(one[0].res_share == doctest::Approx(0.2));
  const auto again = res_sweep(in.net, in.book, config, {0.2});
  CHECK(again[0].lambda_green == one[0].lambda_green);
  CHECK(again[0].delta_green == one[0].delta_green);

  const std::vector<double> shares = {0.2, 0.3, 0.5, 0.6, 0.7, 0.8, 0.9};
  const auto par = res_sweep(in.net, in.book, config, shares);
  config.parallel = false;
  const auto ser = res_sweep(in.net, in.book, config, shares);
  REQUIRE(par.size() == shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    CHECK(par[i].lambda_green == ser[i].lambda_green);
    CHECK(par[i].delta_green == ser[i].delta_green);
    CHECK(par[i].lambda_green >= 0.0);
    CHECK(par[i].delta_green >= -1e-6);
    if (i > 0) CHECK(par[i].lambda_green <= par[i - 1].lambda_green + 1e-9);
  }
  // Green is scarce at 20% and in surplus at 90%.
  CHECK(par.front().lambda_green > 0.0);
  CHECK(par.back().lambda_green == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("premiums can lower total green dispatch under congestion") {
  const auto in = premium_reroute();
  const ClearingSolution standard = clear_standard(in.net, in.book);
  // Most green any standard optimum can carry: a vanishing uniform premium
  // breaks ties toward green without changing the standard welfare.
  OrderBook tie_break = in.book;
  for (Load& l : tie_break.loads) l.alpha = 1e-5;
  const DpdSolution most_green = clear_dpd(in.net, tie_break);
  const double green_max = most_green.total_dispatch(in.book, EnergyClass::kGreen);
  CHECK(green_max == doctest::Approx(standard.total_dispatch(in.book, EnergyClass::kGreen))
                         .epsilon(1e-6));

  const DpdSolution dpd = clear_dpd(in.net, in.book);
  CHECK(dpd.objective >= standard.objective - 1e-6);
  CHECK(dpd.lambda_green >= 0.0);
  const DispatchDelta delta = dispatch_delta(standard, dpd, in.book);
  CHECK(delta.delta_green < -0.1);
  CHECK(dpd.total_dispatch(in.book, EnergyClass::kGreen) < green_max - 0.1);
}

TEST_CASE("config validation") {
  ScenarioConfig c;
  CHECK(c.validate().ok());
  c.alpha_std = -1.0;
  CHECK(c.validate().has("invalid alpha"));
  c = {};
  c.homes_per_mw = 0.0;
  CHECK(c.validate().has("invalid homes"));
  c = {};
  c.target_res_share = 1.5;
  CHECK(c.validate().has("invalid share"));
}

}  // namespace
}  // namespace gridclear
