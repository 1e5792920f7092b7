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
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "gridclear/format.h"
#include "gridclear/lp.h"

namespace gridclear::lp {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
    case Status::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

int LinearProgram::add_variable(std::string name, double lower, double upper,
                                double objective) {
  const int index = static_cast<int>(variables_.size());
  variable_index_.emplace(name, index);
  variables_.push_back({std::move(name), lower, upper, objective});
  return index;
}

int LinearProgram::add_constraint(std::string name, double lower,
                                  double upper, std::vector<Term> terms) {
  const int index = static_cast<int>(constraints_.size());
  constraint_index_.emplace(name, index);
  constraints_.push_back({std::move(name), lower, upper, std::move(terms)});
  return index;
}

void LinearProgram::set_variable_bounds(int var, double lower, double upper) {
  variables_.at(var).lower = lower;
  variables_.at(var).upper = upper;
}

void LinearProgram::set_constraint_bounds(int row, double lower,
                                          double upper) {
  constraints_.at(row).lower = lower;
  constraints_.at(row).upper = upper;
}

std::optional<int> LinearProgram::find_variable(std::string_view name) const {
  auto it = variable_index_.find(std::string(name));
  if (it == variable_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> LinearProgram::find_constraint(
    std::string_view name) const {
  auto it = constraint_index_.find(std::string(name));
  if (it == constraint_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> LinearProgram::check() const {
  std::vector<std::string> problems;
  std::unordered_set<std::string> seen;
  for (const auto& v : variables_) {
    if (!seen.insert(v.name).second) {
      problems.push_back("duplicate variable name '" + v.name + "'");
    }
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      problems.push_back("variable '" + v.name + "' has inverted bounds");
    }
    if (v.lower == kInf || v.upper == -kInf) {
      problems.push_back("variable '" + v.name + "' has an infinite bound on the wrong side");
    }
    if (!std::isfinite(v.objective)) {
      problems.push_back("variable '" + v.name + "' has a non-finite objective");
    }
  }
  seen.clear();
  const int n = static_cast<int>(variables_.size());
  for (const auto& c : constraints_) {
    if (!seen.insert(c.name).second) {
      problems.push_back("duplicate constraint name '" + c.name + "'");
    }
    if (std::isnan(c.lower) || std::isnan(c.upper) || c.lower > c.upper) {
      problems.push_back("constraint '" + c.name + "' has inverted bounds");
    }
    for (const auto& t : c.terms) {
      if (t.var < 0 || t.var >= n) {
        problems.push_back("constraint '" + c.name +
                           "' references an undeclared variable");
      } else if (!std::isfinite(t.coef)) {
        problems.push_back("constraint '" + c.name +
                           "' has a non-finite coefficient");
      }
    }
  }
  return problems;
}

void LinearProgram::write_text(std::ostream& out) const {
  out << "# maximize; " << variables_.size() << " columns, "
      << constraints_.size() << " rows\n";
  for (const auto& v : variables_) {
    out << "col " << v.name << ' ' << format_number(v.lower) << ' '
        << format_number(v.upper) << ' ' << format_number(v.objective)
        << '\n';
  }
  for (const auto& c : constraints_) {
    out << "row " << c.name << ' ' << format_number(c.lower) << ' '
        << format_number(c.upper);
    for (const auto& t : c.terms) {
      out << ' ' << format_number(t.coef) << '*' << variables_[t.var].name;
    }
    out << '\n';
  }
  for (const auto& [key, name] : tags_) {
    out << "tag " << key << ' ' << name << '\n';
  }
}

namespace {

// Picks the bound a multiplier is attached to. Returns false when the
// multiplier points at an infinite bound (dual infeasible).
bool attached_bound(double multiplier, double eps, double lower, double upper,
                    double activity, double* bound) {
  if (multiplier > eps) {
    *bound = upper;
  } else if (multiplier < -eps) {
    *bound = lower;
  } else {
    *bound = activity;
  }
  return std::isfinite(*bound);
}

}  // namespace

Diagnostics evaluate(const LinearProgram& lp, const LPSolution& sol) {
  Diagnostics d;
  const auto& vars = lp.variables();
  const auto& rows = lp.constraints();
  if (sol.primal.size() != vars.size()) {
    throw std::invalid_argument("solution size does not match program");
  }

  double primal_obj = 0.0;
  double max_c = 0.0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    primal_obj += vars[j].objective * sol.primal[j];
    max_c = std::max(max_c, std::abs(vars[j].objective));
    const double x = sol.primal[j];
    d.primal_infeasibility = std::max(
        {d.primal_infeasibility, vars[j].lower - x, x - vars[j].upper});
  }
  std::vector<double> activity(rows.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& t : rows[i].terms) {
      activity[i] += t.coef * sol.primal[t.var];
    }
    d.primal_infeasibility =
        std::max({d.primal_infeasibility, rows[i].lower - activity[i],
                  activity[i] - rows[i].upper});
  }

  if (sol.duals.size() != rows.size() ||
      sol.reduced_costs.size() != vars.size()) {
    d.duality_gap = kInf;
    d.complementary_slackness = kInf;
    return d;
  }

  const double eps = 1e-9 * (1.0 + max_c);
  double dual_obj = 0.0;
  double cs = 0.0;
  bool dual_feasible = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double bound = 0.0;
    if (!attached_bound(sol.duals[i], eps, rows[i].lower, rows[i].upper,
                        activity[i], &bound)) {
      dual_feasible = false;
      continue;
    }
    dual_obj += sol.duals[i] * bound;
    cs = std::max(cs, std::abs(sol.duals[i] * (bound - activity[i])));
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    double bound = 0.0;
    if (!attached_bound(sol.reduced_costs[j], eps, vars[j].lower,
                        vars[j].upper, sol.primal[j], &bound)) {
      dual_feasible = false;
      continue;
    }
    dual_obj += sol.reduced_costs[j] * bound;
    cs = std::max(cs, std::abs(sol.reduced_costs[j] * (bound - sol.primal[j])));
  }
  d.dual_objective = dual_obj;
  d.complementary_slackness = dual_feasible ? cs / (1.0 + std::abs(primal_obj)) : kInf;
  d.duality_gap = dual_feasible
                      ? std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj))
                      : kInf;
  return d;
}

}  // namespace gridclear::lp
