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

// Linear programs in the form
//
//   maximize    c'x
//   subject to  row_lower <= A x <= row_upper
//               var_lower <=  x  <= var_upper
//
// with infinite bounds allowed everywhere. Equality rows have
// row_lower == row_upper.
//
// Dual convention: the dual of a row is d(objective)/d(bound) for the bound
// that is active, so an equality row's dual is the sensitivity of the optimum
// to its right-hand side. Reduced costs follow the same rule for variable
// bounds: reduced_cost = c - A' y.

#ifndef GRIDCLEAR_LP_H_
#define GRIDCLEAR_LP_H_

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gridclear::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
};

struct Constraint {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<Term> terms;
};

class LinearProgram {
 public:
  int add_variable(std::string name, double lower, double upper,
                   double objective = 0.0);
  int add_constraint(std::string name, double lower, double upper,
                     std::vector<Term> terms);
  int add_equality(std::string name, double rhs, std::vector<Term> terms) {
    return add_constraint(std::move(name), rhs, rhs, std::move(terms));
  }

  void set_objective(int var, double coef) { variables_[var].objective = coef; }
  void set_variable_bounds(int var, double lower, double upper);
  void set_constraint_bounds(int row, double lower, double upper);

  // Domain entity -> variable/constraint name, e.g. "balance:bus:3".
  void tag(std::string key, std::string name) {
    tags_[std::move(key)] = std::move(name);
  }
  const std::map<std::string, std::string>& tags() const { return tags_; }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  std::optional<int> find_variable(std::string_view name) const;
  std::optional<int> find_constraint(std::string_view name) const;

  // Returns a description of every well-formedness problem (dangling term,
  // inverted bounds, duplicate names); empty when the program is well formed.
  std::vector<std::string> check() const;

  // Plain-text dump: one line per column ("col <name> <lb> <ub> <obj>") then
  // one per row ("row <name> <lb> <ub> <coef>*<col> ..."). Bounds use
  // "inf"/"-inf"; numbers are written in shortest round-trip form.
  void write_text(std::ostream& out) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, int> variable_index_;
  std::unordered_map<std::string, int> constraint_index_;
  std::map<std::string, std::string> tags_;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

std::string_view to_string(Status s);

struct Tolerances {
  double feasibility = 1e-7;   // absolute, per row of the scaled problem
  double duality_gap = 1e-6;   // relative: |p - d| <= gap * (1 + |p|)
  double complementary_slackness = 1e-6;
  double optimality = 1e-9;    // reduced-cost threshold for pricing
  double pivot = 1e-9;
  long max_iterations = 1'000'000;
};

struct Diagnostics {
  double primal_infeasibility = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;  // relative, as in Tolerances::duality_gap
  double complementary_slackness = 0.0;  // max |dual * slack|, relative as above
};

struct LPSolution {
  Status status = Status::kNumericalFailure;
  double objective_value = 0.0;
  std::vector<double> primal;          // per variable
  std::vector<double> row_activity;    // A x, per constraint
  std::vector<double> duals;           // per constraint
  std::vector<double> reduced_costs;   // per variable
  Diagnostics diagnostics;
  long iterations = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

// Bounded-variable primal revised simplex. Deterministic: identical input
// always follows the same pivot sequence.
LPSolution solve(const LinearProgram& lp, const Tolerances& tol = {});

// Recomputes feasibility, duality gap and complementary slackness of a
// candidate solution against the program, in original units.
Diagnostics evaluate(const LinearProgram& lp, const LPSolution& sol);

}  // namespace gridclear::lp

#endif  // GRIDCLEAR_LP_H_
