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
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "gridclear/grid.h"

namespace gridclear {
namespace {

using testing::kUnlimited;

Network two_bus(double b, double rating) {
  return Network({{1, "a", {}}, {2, "b", {}}}, {make_line(1, 2, b, rating)}, 1);
}

TEST_CASE("validation flags malformed networks") {
  CHECK(validate_network(testing::three_bus().net).ok());
  CHECK(validate_network(testing::four_bus().net).ok());

  Network dup({{1, "a", {}}, {1, "b", {}}}, {}, 1);
  CHECK(validate_network(dup).has("duplicate bus"));

  Network noref({{1, "a", {}}, {2, "b", {}}}, {make_line(1, 2, 1.0, 1.0)}, 9);
  CHECK(validate_network(noref).has("missing reference"));

  Network dangling({{1, "a", {}}, {2, "b", {}}}, {make_line(1, 3, 1.0, 1.0), make_line(1, 2, 1.0, 1.0)}, 1);
  CHECK(validate_network(dangling).has("unknown bus"));

  Network loop({{1, "a", {}}, {2, "b", {}}}, {make_line(1, 1, 1.0, 1.0), make_line(1, 2, 1.0, 1.0)}, 1);
  CHECK(validate_network(loop).has("self loop"));

  CHECK(validate_network(two_bus(0.0, 1.0)).has("nonpositive susceptance"));
  CHECK(validate_network(two_bus(-2.0, 1.0)).has("nonpositive susceptance"));

  Network bracket({{1, "a", {}}, {2, "b", {}}}, {{1, 2, 1.0, 0.5, 2.0}}, 1);
  CHECK(validate_network(bracket).has("limits do not bracket zero"));

  Network parallel({{1, "a", {}}, {2, "b", {}}}, {make_line(1, 2, 1.0, 1.0), make_line(2, 1, 1.0, 1.0)}, 1);
  CHECK(validate_network(parallel).has("parallel lines"));

  Network island({{1, "a", {}}, {2, "b", {}}, {3, "c", {}}}, {make_line(1, 2, 1.0, 1.0)}, 1);
  CHECK(validate_network(island).has("disconnected"));
}

TEST_CASE("dc flow of a single line") {
  const Network net = two_bus(10.0, 5.0);
  const std::vector<double> angles = {0.1, 0.0};
  const auto flows = dc_flows(net, angles);
  REQUIRE(flows.size() == 1);
  CHECK(flows[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(dc_flows(net, std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("zero angles give zero flows") {
  const auto in = testing::four_bus();
  for (double f : dc_flows(in.net, std::vector<double>(4, 0.0))) CHECK(f == 0.0);
}

TEST_CASE("four-bus split between parallel paths") {
  {
    const auto in = testing::four_bus();
    const std::vector<double> inj = {10.0, 0.0, -10.0, 0.0};
    const auto flows = dc_flows(in.net, solve_angles(in.net, inj));
    CHECK(flows[1] == doctest::Approx(1.0));
    CHECK(flows[2] == doctest::Approx(9.0));
  }
  const auto in = testing::four_bus();
  // 100 MW from K (index 0) to L (index 2).
  const std::vector<double> inj = {100.0, 0.0, -100.0, 0.0};
  const auto angles = solve_angles(in.net, inj);
  const auto flows = dc_flows(in.net, angles);
  CHECK(flows[0] == doctest::Approx(10.0));  // K-M
  CHECK(flows[1] == doctest::Approx(10.0));  // M-L
  CHECK(flows[2] == doctest::Approx(90.0));  // K-L
  CHECK(std::abs(flows[3]) < 1e-9);

  // 20 MW from G to L: half via M-L, half via M-K-L.
  const std::vector<double> green = {0.0, 0.0, -20.0, 20.0};
  const auto gf = dc_flows(in.net, solve_angles(in.net, green));
  CHECK(gf[1] == doctest::Approx(10.0));
  CHECK(gf[0] == doctest::Approx(-10.0));
  CHECK(gf[3] == doctest::Approx(20.0));
}

TEST_CASE("flow properties on random networks") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const auto in = testing::random_instance(rng);
    const std::size_t n = in.net.num_buses();
    std::vector<double> a(n), b(n), mix(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = nd(rng);
      b[i] = nd(rng);
      mix[i] = 2.5 * a[i] - b[i];
    }
    const auto fa = dc_flows(in.net, a);
    const auto fb = dc_flows(in.net, b);
    const auto fm = dc_flows(in.net, mix);
    for (std::size_t k = 0; k < fa.size(); ++k) {
      CHECK(fm[k] == doctest::Approx(2.5 * fa[k] - fb[k]).epsilon(1e-12).scale(1.0));
    }
    const auto inj = bus_injections(in.net, fa);
    double sum = 0.0;
    for (double p : inj) sum += p;
    CHECK(std::abs(sum) < 1e-9);

    // Round trip injections -> angles -> flows -> injections.
    const auto back = bus_injections(in.net, dc_flows(in.net, solve_angles(in.net, inj)));
    for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(inj[i]).scale(1.0));
  }
}

TEST_CASE("solve_angles rejects unbalanced injections") {
  const Network net = two_bus(1.0, 1.0);
  CHECK_THROWS_AS(solve_angles(net, std::vector<double>{1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("max deliverable on the four-bus case") {
  const auto in = testing::four_bus();
  const Source green[] = {{4, 1000.0}};
  const Source black[] = {{1, 1000.0}};
  CHECK(max_deliverable(in.net, green, 3) == doctest::Approx(20.0).epsilon(1e-6));
  CHECK(max_deliverable(in.net, black, 3) == doctest::Approx(100.0).epsilon(1e-6));
  const Source small[] = {{4, 7.0}};
  CHECK(max_deliverable(in.net, small, 3) == doctest::Approx(7.0).epsilon(1e-6));
  // Copper plate removes the bottleneck.
  CHECK(max_deliverable(in.net.copper_plate(), green, 3) == doctest::Approx(1000.0).epsilon(1e-6));
}

TEST_CASE("max deliverable on the triangle") {
  const auto in = testing::three_bus();
  const Source green[] = {{1, 4.0}};
  const Source both[] = {{1, 4.0}, {2, 4.0}};
  CHECK(max_deliverable(in.net, green, 3) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(max_deliverable(in.net, both, 3) == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("max deliverable grows with line rating") {
  double previous = 0.0;
  for (double rating : {1.0, 2.0, 5.0, 10.0, 20.0, 40.0}) {
    auto lines = testing::four_bus().net.lines();
    lines[1] = make_line(2, 3, 1.0 / 0.05, rating);
    const Network net(testing::four_bus().net.buses(), lines, 1);
    const Source green[] = {{4, 30.0}};
    const double d = max_deliverable(net, green, 3);
    CHECK(d >= previous - 1e-9);
    CHECK(d == doctest::Approx(std::min(30.0, 2.0 * rating)).epsilon(1e-6));
    previous = d;
  }
}

}  // namespace
}  // namespace gridclear
