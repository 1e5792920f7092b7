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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.h"
#include "gridclear/clearing.h"

namespace gridclear {
namespace {

using testing::four_bus;
using testing::three_bus;

constexpr double kTol = 1e-6;

// Objective after forcing an extra withdrawal of `eps` at bus `bus`.
double objective_with_withdrawal(const testing::Instance& in, BusId bus, double eps,
                                 bool dpd) {
  testing::Instance copy = in;
  copy.book.loads.push_back({"probe", bus, {{eps, eps, 0.0}}, 0.0});
  return dpd ? clear_dpd(copy.net, copy.book).objective
             : clear_standard(copy.net, copy.book).objective;
}

TEST_CASE("three-bus standard clearing") {
  const auto in = three_bus();
  const ClearingSolution sol = clear_standard(in.net, in.book);
  CHECK(sol.generator_total(0) == doctest::Approx(3.0).epsilon(kTol));
  CHECK(sol.generator_total(1) == doctest::Approx(0.0).epsilon(kTol));
  CHECK(sol.total_served() == doctest::Approx(3.0).epsilon(kTol));
  CHECK(sol.black_lmp[0] == doctest::Approx(0.0).epsilon(kTol));
  CHECK(sol.black_lmp[1] == doctest::Approx(8.0).epsilon(kTol));
  CHECK(sol.black_lmp[2] == doctest::Approx(4.0).epsilon(kTol));
  CHECK(sol.objective == doctest::Approx(12.0).epsilon(kTol));
  REQUIRE(sol.congested_lines.size() == 1);
  CHECK(sol.congested_lines[0] == 0);
  CHECK(std::abs(sol.flows[0] - 1.0) < kTol);
}

TEST_CASE("three-bus model has one row per line") {
  const auto in = three_bus();
  const ClearingModel m = build_standard_clearing(in.net, in.book);
  CHECK(m.line_rows.size() == 3);
  CHECK(m.balance_rows.size() == 3);
  CHECK(m.lp.constraints().size() == 7);
  CHECK(m.lp.variables().size() == 6);
  CHECK(m.lp.find_constraint("balance_2").has_value());
  const ClearingModel d = build_dpd_clearing(in.net, in.book);
  CHECK(d.lp.constraints().size() == 9);
  CHECK(d.lp.variables().size() == 8);
  CHECK(d.green_balance_row >= 0);
}

TEST_CASE("three-bus dual-pricing clearing") {
  const auto in = three_bus(3.0);
  const DpdSolution sol = clear_dpd(in.net, in.book);
  CHECK(sol.total_served() == doctest::Approx(5.0).epsilon(kTol));
  CHECK(sol.total_dispatch(in.book, EnergyClass::kGreen) == doctest::Approx(4.0).epsilon(kTol));
  CHECK(sol.total_dispatch(in.book, EnergyClass::kBlack) == doctest::Approx(1.0).epsilon(kTol));
  CHECK(sol.green_allocation[0] == doctest::Approx(4.0).epsilon(kTol));
  CHECK(sol.black_allocation[0] == doctest::Approx(1.0).epsilon(kTol));
  CHECK(sol.lambda_green == doctest::Approx(3.0).epsilon(kTol));
  CHECK(sol.black_lmp[0] == doctest::Approx(-2.0).epsilon(kTol));
  CHECK(sol.black_lmp[1] == doctest::Approx(10.0).epsilon(kTol));
  CHECK(sol.black_lmp[2] == doctest::Approx(4.0).epsilon(kTol));
  for (std::size_t b = 0; b < 3; ++b) {
    CHECK(sol.green_lmp[b] - sol.black_lmp[b] == doctest::Approx(3.0).epsilon(kTol));
  }
  // 5 MWh at $4, 1 MWh black at $10, 4 MWh green premium at $3.
  CHECK(sol.objective == doctest::Approx(22.0).epsilon(kTol));
}

TEST_CASE("black LMP matches finite-difference withdrawal cost") {
  // Prices are read from duals; here they are recomputed by perturbing the
  // market, which does not touch the dual values at all.
  const double eps = 1e-3;
  for (bool dpd : {false, true}) {
    const auto in = three_bus(3.0);
    const double base = dpd ? clear_dpd(in.net, in.book).objective
                            : clear_standard(in.net, in.book).objective;
    const ClearingSolution sol = dpd ? static_cast<ClearingSolution>(clear_dpd(in.net, in.book))
                                     : clear_standard(in.net, in.book);
    for (const Bus& bus : in.net.buses()) {
      const double fd = (base - objective_with_withdrawal(in, bus.id, eps, dpd)) / eps;
      CHECK(fd == doctest::Approx(sol.black_lmp[in.net.index_of(bus.id)]).epsilon(1e-6));
    }
  }
}

TEST_CASE("zero alpha reproduces standard clearing objective") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    auto in = testing::random_instance(rng);
    for (auto& l : in.book.loads) l.alpha = 0.0;
    const double s = clear_standard(in.net, in.book).objective;
    const double d = clear_dpd(in.net, in.book).objective;
    CHECK(std::abs(s - d) <= 1e-6 * (1.0 + std::abs(s)));
  }
}

TEST_CASE("four-bus curtailment threshold") {
  {
    const auto in = four_bus(12.4, 10.0);
    const ClearingSolution sol = clear_standard(in.net, in.book);
    CHECK(sol.generator_total(0) == doctest::Approx(20.0).epsilon(kTol));
    CHECK(sol.generator_total(1) == doctest::Approx(0.0).epsilon(kTol));
  }
  {
    const auto in = four_bus(12.6, 10.0);
    const ClearingSolution sol = clear_standard(in.net, in.book);
    CHECK(std::abs(sol.generator_total(0)) < kTol);
    CHECK(sol.generator_total(1) == doctest::Approx(100.0).epsilon(kTol));
  }
}

TEST_CASE("settlement") {
  const auto in = three_bus(3.0);
  const DpdSolution sol = clear_dpd(in.net, in.book);
  const Settlement s = settle(sol, in.net, in.book);
  // Load: 1 MWh black at 4, 4 MWh green at 7.
  CHECK(s.load_payment[0] == doctest::Approx(32.0));
  // Green gen: 4 MWh at -2 + 3; black gen: 1 MWh at 10.
  CHECK(s.generator_revenue[0] == doctest::Approx(4.0));
  CHECK(s.generator_revenue[1] == doctest::Approx(10.0));
  CHECK(s.merchandising_surplus == doctest::Approx(18.0));

  const auto std_in = three_bus();
  const ClearingSolution st = clear_standard(std_in.net, std_in.book);
  const Settlement ss = settle(st, std_in.net, std_in.book);
  CHECK(ss.load_payment[0] == doctest::Approx(12.0));
  CHECK(ss.generator_revenue[0] == doctest::Approx(0.0));
  CHECK(ss.merchandising_surplus == doctest::Approx(12.0));
}

TEST_CASE("empty book clears to zero") {
  auto in = three_bus();
  in.book = {};
  const ClearingSolution sol = clear_standard(in.net, in.book);
  CHECK(sol.objective == doctest::Approx(0.0));
  for (double f : sol.flows) CHECK(std::abs(f) < 1e-9);
  const DpdSolution d = clear_dpd(in.net, in.book);
  CHECK(d.objective == doctest::Approx(0.0));
}

TEST_CASE("no green generators forces zero green allocation") {
  auto in = three_bus(3.0);
  in.book.generators[0].energy_class = EnergyClass::kBlack;
  const DpdSolution sol = clear_dpd(in.net, in.book);
  CHECK(std::abs(sol.green_allocation[0]) < 1e-9);
  CHECK(sol.black_allocation[0] == doctest::Approx(sol.load_total(0)));
}

TEST_CASE("only a 1 MW limit on the green-black line reproduces 3 and 5 MWh") {
  // Brute force over single-line limit hypotheses on the triangle.
  int matches = 0;
  std::size_t matched_line = 99;
  double matched_limit = 0.0;
  for (std::size_t line = 0; line < 3; ++line) {
    for (int step = 1; step <= 16; ++step) {
      const double limit = 0.25 * step;
      auto in = three_bus(3.0);
      std::vector<Line> lines;
      for (std::size_t k = 0; k < 3; ++k) {
        const Line& l = in.net.lines()[k];
        lines.push_back(make_line(l.from_bus, l.to_bus, 1.0,
                                  k == line ? limit : testing::kUnlimited));
      }
      in.net = Network(in.net.buses(), lines, 1);
      const double s = clear_standard(in.net, in.book).total_served();
      const double d = clear_dpd(in.net, in.book).total_served();
      if (std::abs(s - 3.0) < 1e-6 && std::abs(d - 5.0) < 1e-6) {
        ++matches;
        matched_line = line;
        matched_limit = limit;
      }
    }
  }
  CHECK(matches == 1);
  CHECK(matched_line == 0);
  CHECK(matched_limit == 1.0);
}

TEST_CASE("green dispatch and green prices rise with alpha on the triangle") {
  double last_green = -1.0;
  std::vector<double> last_lmp(3, -1e300);
  for (int k = 0; k <= 10; ++k) {
    const double alpha = 0.5 * k;
    const auto in = three_bus(alpha);
    const DpdSolution sol = clear_dpd(in.net, in.book);
    const double green = sol.total_dispatch(in.book, EnergyClass::kGreen);
    CHECK(green >= last_green - 1e-9);
    for (std::size_t b = 0; b < 3; ++b) {
      CHECK(sol.green_lmp[b] >= last_lmp[b] - 1e-9);
      last_lmp[b] = sol.green_lmp[b];
    }
    last_green = green;
  }
}

TEST_CASE("settlement without a green premium is single-price") {
  const auto in = three_bus(0.0);
  DpdSolution sol = clear_dpd(in.net, in.book);
  sol.lambda_green = 0.0;
  const Settlement d = settle(sol, in.net, in.book);
  const Settlement s = settle(static_cast<const ClearingSolution&>(sol), in.net, in.book);
  for (std::size_t i = 0; i < d.load_payment.size(); ++i) {
    CHECK(d.load_payment[i] == doctest::Approx(s.load_payment[i]));
  }
  for (std::size_t k = 0; k < d.generator_revenue.size(); ++k) {
    CHECK(d.generator_revenue[k] == doctest::Approx(s.generator_revenue[k]));
  }

  auto idle = three_bus(0.0);
  idle.book.loads[0].blocks[0].value = -1.0;
  const DpdSolution none = clear_dpd(idle.net, idle.book);
  const Settlement z = settle(none, idle.net, idle.book);
  CHECK(z.total_payment == doctest::Approx(0.0));
  CHECK(z.total_revenue == doctest::Approx(0.0));
}

TEST_CASE("congestion reporting on the four-bus case and copper plate") {
  const auto in = four_bus(12.6, 10.0);
  const ClearingSolution sol = clear_standard(in.net, in.book);
  REQUIRE(sol.congested_lines.size() == 1);
  CHECK(sol.congested_lines[0] == 1);
  CHECK(sol.flows[1] == doctest::Approx(10.0));
  const ClearingSolution cp = clear_standard(in.net.copper_plate(), in.book);
  CHECK(cp.congested_lines.empty());
}

TEST_CASE("infeasible clearing raises") {
  auto in = three_bus();
  in.book.loads[0].blocks[0].quantity_min = 9.0;  // more than can be supplied
  CHECK_THROWS_AS(clear_standard(in.net, in.book), ClearingError);
  try {
    clear_standard(in.net, in.book);
  } catch (const ClearingError& e) {
    CHECK(e.status() == lp::Status::kInfeasible);
  }
}

TEST_CASE("congested lines tolerance") {
  const auto in = three_bus();
  std::vector<double> flows = {1.0 - 5e-6, 100.0, -100.0};
  CHECK(congested_lines(in.net, flows, 1e-5).size() == 1);
  flows[0] = 1.0 - 5e-5;
  CHECK(congested_lines(in.net, flows, 1e-5).empty());
  flows[0] = -1.0;
  CHECK(congested_lines(in.net, flows, 1e-5).size() == 1);
}

TEST_CASE("surplus green keeps a nonnegative premium price") {
  // More cheap green than the single load can take.
  testing::Instance in;
  in.net = Network({{1, "a", {}}}, {}, 1);
  in.book.generators = {{"w", 1, EnergyClass::kGreen, {{0, 10, 0}}, 12, "wind"},
                        {"c", 1, EnergyClass::kBlack, {{0, 10, 2}}, 1000, "coal"}};
  in.book.loads = {{"d", 1, {{0, 5, 10}}, 3}};
  const DpdSolution sol = clear_dpd(in.net, in.book);
  CHECK(sol.total_dispatch(in.book, EnergyClass::kGreen) == doctest::Approx(5));
  CHECK(sol.green_allocation[0] == doctest::Approx(5));
  CHECK(sol.lambda_green >= 0.0);
  CHECK(sol.lambda_green <= 3.0 + 1e-9);

  SUBCASE("zero-premium loads are relabelled green") {
    in.book.loads = {{"d", 1, {{0, 5, 10}}, 0}, {"e", 1, {{0, 2, 10}}, 1}};
    const DpdSolution z = clear_dpd(in.net, in.book);
    const double green = z.total_dispatch(in.book, EnergyClass::kGreen);
    CHECK(green == doctest::Approx(7));
    CHECK(z.green_allocation[0] + z.green_allocation[1] == doctest::Approx(green));
    CHECK(z.green_allocation[0] + z.black_allocation[0] == doctest::Approx(z.load_total(0)));
    CHECK(z.black_allocation[0] >= 0.0);
    CHECK(z.lambda_green >= 0.0);
  }
}

}  // namespace
}  // namespace gridclear
