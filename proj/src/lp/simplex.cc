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

// Bounded-variable primal revised simplex.
//
// Every row i gets a slack s_i with bounds [row_lower_i, row_upper_i] and an
// artificial a_i, turning the program into [A -I S] z = 0 where S is a
// diagonal of +/-1. Artificials only enter the initial basis for rows the
// starting point violates; phase 1 drives them to zero and phase 2 pins them
// at zero. The basis inverse is an Eigen SparseLU factorization followed by
// a product-form eta file that is flushed every kRefactorInterval pivots.
//
// Pricing is Dantzig's rule. After kDegenerateLimit consecutive degenerate
// pivots the solver switches to Bland's smallest-index rule until the
// objective moves again, which rules out cycling. The ratio test is Harris'
// two-pass test outside Bland mode.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "gridclear/lp.h"

namespace gridclear::lp {
namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vec = Eigen::VectorXd;

constexpr int kRefactorInterval = 64;
constexpr int kDegenerateLimit = 100;
constexpr int kScalePasses = 8;

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VarState : std::uint8_t { kBasic, kLower, kUpper, kFree };

struct Eta {
  int pos = 0;
  double pivot = 1.0;
  std::vector<std::pair<int, double>> off;  // (position, alpha), pos excluded
};

double power_of_two(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
  return std::exp2(std::round(std::log2(s)));
}

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Tolerances& tol, double pivot_tol,
          int refactor_interval)
      : lp_(lp),
        tol_(tol),
        pivot_tol_(pivot_tol),
        refactor_interval_(refactor_interval) {}

  LPSolution run();

 private:
  int slack(int i) const { return n_ + i; }
  int artificial(int i) const { return n_ + m_ + i; }
  bool is_artificial(int j) const { return j >= n_ + m_; }
  bool fixed(int j) const { return lo_[j] == up_[j]; }

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      for (SpMat::InnerIterator it(a_, j); it; ++it) f(it.row(), it.value());
    } else if (j < n_ + m_) {
      f(j - n_, -1.0);
    } else {
      f(j - n_ - m_, static_cast<double>(art_sign_[j - n_ - m_]));
    }
  }
  double column_dot(int j, const Vec& y) const {
    double s = 0.0;
    for_column(j, [&](int i, double v) { s += v * y[i]; });
    return s;
  }

  void scale_and_load();
  void initial_basis();
  void crash_free_variables();
  void refactor();
  void recompute_basic_values();
  Vec ftran(int j) const;
  Vec btran(const Vec& cb) const;
  void pivot(int r, int q, const Vec& alpha);
  PhaseResult iterate(const std::vector<double>& cost);
  LPSolution extract(Status status) const;

  const LinearProgram& lp_;
  Tolerances tol_;
  double pivot_tol_;
  int refactor_interval_;

  int m_ = 0;
  int n_ = 0;
  int total_ = 0;
  SpMat a_;
  std::vector<double> row_scale_, col_scale_;
  double obj_scale_ = 1.0;
  std::vector<double> lo_, up_, cost_;
  std::vector<int> art_sign_;

  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  std::vector<int> pos_;
  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  long iterations_ = 0;
};

void Simplex::scale_and_load() {
  const auto& vars = lp_.variables();
  const auto& rows = lp_.constraints();
  m_ = static_cast<int>(rows.size());
  n_ = static_cast<int>(vars.size());
  total_ = n_ + 2 * m_;

  std::vector<Eigen::Triplet<double, int>> trips;
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : rows[i].terms) {
      if (t.coef != 0.0) trips.emplace_back(i, t.var, t.coef);
    }
  }

  // Geometric-mean equilibration, rounded to powers of two so that scaling
  // and unscaling are exact.
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  std::vector<double> lo_acc, hi_acc;
  for (int pass = 0; pass < kScalePasses; ++pass) {
    lo_acc.assign(m_, kInf);
    hi_acc.assign(m_, 0.0);
    for (const auto& t : trips) {
      const double v = std::abs(t.value()) * col_scale_[t.col()];
      lo_acc[t.row()] = std::min(lo_acc[t.row()], v);
      hi_acc[t.row()] = std::max(hi_acc[t.row()], v);
    }
    for (int i = 0; i < m_; ++i) {
      if (hi_acc[i] > 0.0) row_scale_[i] = 1.0 / std::sqrt(lo_acc[i] * hi_acc[i]);
    }
    lo_acc.assign(n_, kInf);
    hi_acc.assign(n_, 0.0);
    for (const auto& t : trips) {
      const double v = std::abs(t.value()) * row_scale_[t.row()];
      lo_acc[t.col()] = std::min(lo_acc[t.col()], v);
      hi_acc[t.col()] = std::max(hi_acc[t.col()], v);
    }
    for (int j = 0; j < n_; ++j) {
      if (hi_acc[j] > 0.0) col_scale_[j] = 1.0 / std::sqrt(lo_acc[j] * hi_acc[j]);
    }
  }
  for (auto& s : row_scale_) s = power_of_two(s);
  for (auto& s : col_scale_) s = power_of_two(s);

  double max_cost = 0.0;
  for (int j = 0; j < n_; ++j) {
    max_cost = std::max(max_cost, std::abs(vars[j].objective * col_scale_[j]));
  }
  obj_scale_ = max_cost > 0.0 ? power_of_two(1.0 / max_cost) : 1.0;

  for (auto& t : trips) {
    t = Eigen::Triplet<double, int>(
        t.row(), t.col(),
        t.value() * row_scale_[t.row()] * col_scale_[t.col()]);
  }
  a_.resize(m_, n_);
  a_.setFromTriplets(trips.begin(), trips.end());
  a_.makeCompressed();

  lo_.assign(total_, 0.0);
  up_.assign(total_, 0.0);
  cost_.assign(total_, 0.0);
  for (int j = 0; j < n_; ++j) {
    lo_[j] = vars[j].lower / col_scale_[j];
    up_[j] = vars[j].upper / col_scale_[j];
    cost_[j] = vars[j].objective * col_scale_[j] * obj_scale_;
  }
  for (int i = 0; i < m_; ++i) {
    lo_[slack(i)] = rows[i].lower * row_scale_[i];
    up_[slack(i)] = rows[i].upper * row_scale_[i];
  }
  art_sign_.assign(m_, 1);
}

void Simplex::initial_basis() {
  x_.assign(total_, 0.0);
  state_.assign(total_, VarState::kLower);
  pos_.assign(total_, -1);
  basis_.assign(m_, -1);

  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lo_[j])) {
      x_[j] = lo_[j];
      state_[j] = VarState::kLower;
    } else if (std::isfinite(up_[j])) {
      x_[j] = up_[j];
      state_[j] = VarState::kUpper;
    } else {
      x_[j] = 0.0;
      state_[j] = VarState::kFree;
    }
  }
  Vec activity = Vec::Zero(m_);
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for (SpMat::InnerIterator it(a_, j); it; ++it) {
      activity[it.row()] += it.value() * x_[j];
    }
  }
  for (int i = 0; i < m_; ++i) {
    const int s = slack(i);
    const int a = artificial(i);
    const double r = activity[i];
    lo_[a] = 0.0;
    up_[a] = 0.0;
    if (r >= lo_[s] - tol_.feasibility && r <= up_[s] + tol_.feasibility) {
      basis_[i] = s;
      pos_[s] = i;
      state_[s] = VarState::kBasic;
      x_[s] = r;
    } else {
      const double b = r < lo_[s] ? lo_[s] : up_[s];
      x_[s] = b;
      state_[s] = (b == lo_[s]) ? VarState::kLower : VarState::kUpper;
      art_sign_[i] = b > r ? 1 : -1;
      up_[a] = kInf;
      x_[a] = std::abs(b - r);
      basis_[i] = a;
      pos_[a] = i;
      state_[a] = VarState::kBasic;
    }
  }
}

void Simplex::refactor() {
  etas_.clear();
  if (m_ == 0) return;
  std::vector<Eigen::Triplet<double, int>> trips;
  for (int r = 0; r < m_; ++r) {
    for_column(basis_[r], [&](int i, double v) { trips.emplace_back(i, r, v); });
  }
  SpMat b(m_, m_);
  b.setFromTriplets(trips.begin(), trips.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  if (lu_.info() != Eigen::Success) {
    throw FactorizationError("basis factorization failed: " + lu_.lastErrorMessage());
  }
}

Vec Simplex::ftran(int j) const {
  Vec v = Vec::Zero(m_);
  if (m_ == 0) return v;
  for_column(j, [&](int i, double val) { v[i] += val; });
  v = lu_.solve(v);
  for (const auto& e : etas_) {
    const double vr = v[e.pos] / e.pivot;
    v[e.pos] = vr;
    if (vr == 0.0) continue;
    for (const auto& [i, a] : e.off) v[i] -= a * vr;
  }
  return v;
}

Vec Simplex::btran(const Vec& cb) const {
  if (m_ == 0) return cb;
  Vec v = cb;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->pos];
    for (const auto& [i, a] : it->off) s -= a * v[i];
    v[it->pos] = s / it->pivot;
  }
  return lu_.transpose().solve(v);
}

void Simplex::recompute_basic_values() {
  if (m_ == 0) return;
  Vec rhs = Vec::Zero(m_);
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
    const double xj = x_[j];
    for_column(j, [&](int i, double v) { rhs[i] -= v * xj; });
  }
  Vec xb = lu_.solve(rhs);
  for (const auto& e : etas_) {
    const double vr = xb[e.pos] / e.pivot;
    xb[e.pos] = vr;
    for (const auto& [i, a] : e.off) xb[i] -= a * vr;
  }
  for (int r = 0; r < m_; ++r) x_[basis_[r]] = xb[r];
}

void Simplex::pivot(int r, int q, const Vec& alpha) {
  Eta e;
  e.pos = r;
  e.pivot = alpha[r];
  for (int i = 0; i < m_; ++i) {
    if (i != r && alpha[i] != 0.0) e.off.emplace_back(i, alpha[i]);
  }
  etas_.push_back(std::move(e));
  const int leaving = basis_[r];
  pos_[leaving] = -1;
  basis_[r] = q;
  pos_[q] = r;
  state_[q] = VarState::kBasic;
  if (static_cast<int>(etas_.size()) >= refactor_interval_) {
    refactor();
    recompute_basic_values();
  }
}

// Pivots free structurals into positions held by fixed basic variables so
// that equality rows stop blocking every step with a zero ratio.
void Simplex::crash_free_variables() {
  for (int j = 0; j < n_; ++j) {
    if (state_[j] != VarState::kFree) continue;
    const Vec alpha = ftran(j);
    double biggest = alpha.size() ? alpha.cwiseAbs().maxCoeff() : 0.0;
    int best = -1;
    double best_abs = 0.0;
    for (int r = 0; r < m_; ++r) {
      const int v = basis_[r];
      if (!fixed(v) || is_artificial(v)) continue;
      const double a = std::abs(alpha[r]);
      if (a > best_abs && a >= 1e-3 * biggest && a > pivot_tol_) {
        best_abs = a;
        best = r;
      }
    }
    if (best < 0) continue;
    const int leaving = basis_[best];
    x_[leaving] = lo_[leaving];
    state_[leaving] = VarState::kLower;
    pivot(best, j, alpha);
  }
  refactor();
  recompute_basic_values();
}

PhaseResult Simplex::iterate(const std::vector<double>& cost) {
  int degenerate_run = 0;
  Vec cb(m_);
  for (;;) {
    if (iterations_ >= tol_.max_iterations) return PhaseResult::kIterationLimit;
    const bool bland = degenerate_run >= kDegenerateLimit;

    for (int r = 0; r < m_; ++r) cb[r] = cost[basis_[r]];
    const Vec y = btran(cb);

    // Pricing.
    int q = -1;
    double q_d = 0.0;
    double best_score = 0.0;
    for (int j = 0; j < total_; ++j) {
      const VarState st = state_[j];
      if (st == VarState::kBasic || fixed(j)) continue;
      const double d = cost[j] - column_dot(j, y);
      bool eligible = false;
      if (st == VarState::kLower) {
        eligible = d > tol_.optimality;
      } else if (st == VarState::kUpper) {
        eligible = d < -tol_.optimality;
      } else {
        eligible = std::abs(d) > tol_.optimality;
      }
      if (!eligible) continue;
      if (bland) {
        q = j;
        q_d = d;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        q = j;
        q_d = d;
      }
    }
    if (q < 0) return PhaseResult::kOptimal;

    const double dir = q_d > 0.0 ? 1.0 : -1.0;
    const Vec alpha = ftran(q);

    double flip = kInf;
    if (std::isfinite(lo_[q]) && std::isfinite(up_[q])) flip = up_[q] - lo_[q];

    // Ratio test. Basic variable at position r moves by delta_r * t.
    int leave = -1;
    double step = kInf;
    if (bland) {
      int leave_var = -1;
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha[r]) <= pivot_tol_) continue;
        const int v = basis_[r];
        const double delta = -dir * alpha[r];
        double ratio = kInf;
        if (delta < 0.0 && std::isfinite(lo_[v])) {
          ratio = std::max(0.0, (x_[v] - lo_[v]) / -delta);
        } else if (delta > 0.0 && std::isfinite(up_[v])) {
          ratio = std::max(0.0, (up_[v] - x_[v]) / delta);
        }
        if (ratio < step || (ratio == step && ratio < kInf && v < leave_var)) {
          step = ratio;
          leave = r;
          leave_var = v;
        }
      }
    } else {
      double bound = kInf;
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha[r]) <= pivot_tol_) continue;
        const int v = basis_[r];
        const double delta = -dir * alpha[r];
        if (delta < 0.0 && std::isfinite(lo_[v])) {
          bound = std::min(bound, (x_[v] - lo_[v] + tol_.feasibility) / -delta);
        } else if (delta > 0.0 && std::isfinite(up_[v])) {
          bound = std::min(bound, (up_[v] - x_[v] + tol_.feasibility) / delta);
        }
      }
      if (flip > bound) {
        double best_alpha = 0.0;
        for (int r = 0; r < m_; ++r) {
          if (std::abs(alpha[r]) <= pivot_tol_) continue;
          const int v = basis_[r];
          const double delta = -dir * alpha[r];
          double ratio = kInf;
          if (delta < 0.0 && std::isfinite(lo_[v])) {
            ratio = (x_[v] - lo_[v]) / -delta;
          } else if (delta > 0.0 && std::isfinite(up_[v])) {
            ratio = (up_[v] - x_[v]) / delta;
          }
          if (ratio <= bound && std::abs(alpha[r]) > best_alpha) {
            best_alpha = std::abs(alpha[r]);
            leave = r;
            step = std::max(0.0, ratio);
          }
        }
      }
    }

    if (flip <= step) {
      leave = -1;
      step = flip;
    }
    if (!std::isfinite(step)) return PhaseResult::kUnbounded;

    ++iterations_;
    degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;

    if (step > 0.0) {
      for (int r = 0; r < m_; ++r) {
        if (alpha[r] != 0.0) x_[basis_[r]] -= dir * alpha[r] * step;
      }
    }
    if (leave < 0) {
      // Bound flip of the entering variable.
      if (dir > 0.0) {
        x_[q] = up_[q];
        state_[q] = VarState::kUpper;
      } else {
        x_[q] = lo_[q];
        state_[q] = VarState::kLower;
      }
      continue;
    }
    x_[q] += dir * step;
    const int v = basis_[leave];
    const double delta = -dir * alpha[leave];
    if (delta < 0.0 || fixed(v)) {
      x_[v] = lo_[v];
      state_[v] = VarState::kLower;
    } else {
      x_[v] = up_[v];
      state_[v] = VarState::kUpper;
    }
    if (is_artificial(v)) {
      // Once out, an artificial never comes back.
      up_[v] = 0.0;
      x_[v] = 0.0;
      state_[v] = VarState::kLower;
    }
    pivot(leave, q, alpha);
  }
}

LPSolution Simplex::extract(Status status) const {
  LPSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  if (status != Status::kOptimal) return sol;

  sol.primal.resize(n_);
  for (int j = 0; j < n_; ++j) sol.primal[j] = x_[j] * col_scale_[j];

  Vec cb(m_);
  for (int r = 0; r < m_; ++r) cb[r] = cost_[basis_[r]];
  const Vec y = btran(cb);

  sol.duals.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const bool basic_slack = state_[slack(i)] == VarState::kBasic;
    sol.duals[i] = basic_slack ? 0.0 : y[i] * row_scale_[i] / obj_scale_;
  }
  sol.reduced_costs.resize(n_);
  for (int j = 0; j < n_; ++j) {
    const double d = state_[j] == VarState::kBasic ? 0.0 : cost_[j] - column_dot(j, y);
    sol.reduced_costs[j] = d / (col_scale_[j] * obj_scale_);
  }

  const auto& vars = lp_.variables();
  const auto& rows = lp_.constraints();
  sol.objective_value = 0.0;
  for (int j = 0; j < n_; ++j) sol.objective_value += vars[j].objective * sol.primal[j];
  sol.row_activity.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : rows[i].terms) sol.row_activity[i] += t.coef * sol.primal[t.var];
  }
  return sol;
}

LPSolution Simplex::run() {
  scale_and_load();
  initial_basis();
  refactor();
  crash_free_variables();

  bool need_phase1 = false;
  for (int i = 0; i < m_; ++i) {
    if (state_[artificial(i)] == VarState::kBasic && up_[artificial(i)] > 0.0) {
      need_phase1 = true;
    }
  }
  if (need_phase1) {
    std::vector<double> phase1_cost(total_, 0.0);
    for (int i = 0; i < m_; ++i) phase1_cost[artificial(i)] = -1.0;
    const PhaseResult r = iterate(phase1_cost);
    if (r != PhaseResult::kOptimal) return extract(Status::kNumericalFailure);
    refactor();
    recompute_basic_values();
    for (int i = 0; i < m_; ++i) {
      const int a = artificial(i);
      if (state_[a] == VarState::kBasic && x_[a] > tol_.feasibility) {
        return extract(Status::kInfeasible);
      }
    }
    for (int i = 0; i < m_; ++i) up_[artificial(i)] = 0.0;
  }

  const PhaseResult r = iterate(cost_);
  if (r == PhaseResult::kUnbounded) return extract(Status::kUnbounded);
  if (r != PhaseResult::kOptimal) return extract(Status::kNumericalFailure);
  refactor();
  recompute_basic_values();

  // Scaled primal feasibility of the final basis.
  for (int r2 = 0; r2 < m_; ++r2) {
    const int v = basis_[r2];
    if (x_[v] < lo_[v] - tol_.feasibility || x_[v] > up_[v] + tol_.feasibility) {
      return extract(Status::kNumericalFailure);
    }
  }
  return extract(Status::kOptimal);
}

LPSolution solve_trivial(const LinearProgram& lp) {
  // No rows: every variable sits at the bound its objective prefers.
  LPSolution sol;
  const auto& vars = lp.variables();
  sol.primal.resize(vars.size());
  sol.reduced_costs.resize(vars.size());
  sol.status = Status::kOptimal;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    double x = 0.0;
    if (v.objective > 0.0) {
      x = v.upper;
    } else if (v.objective < 0.0) {
      x = v.lower;
    } else {
      x = std::isfinite(v.lower) ? v.lower : (std::isfinite(v.upper) ? v.upper : 0.0);
    }
    if (!std::isfinite(x)) {
      sol.status = Status::kUnbounded;
      sol.primal.clear();
      sol.reduced_costs.clear();
      return sol;
    }
    sol.primal[j] = x;
    sol.reduced_costs[j] = v.objective;
    sol.objective_value += v.objective * x;
  }
  return sol;
}

}  // namespace

LPSolution solve(const LinearProgram& lp, const Tolerances& tol) {
  if (auto problems = lp.check(); !problems.empty()) {
    throw std::invalid_argument("malformed linear program: " + problems.front());
  }
  LPSolution sol;
  if (lp.num_constraints() == 0) {
    sol = solve_trivial(lp);
  } else {
    // Retry with a stricter pivot threshold and more frequent refactoring if
    // the basis breaks down or the final point misses the tolerances.
    const double pivot_tols[] = {tol.pivot, 1e-7, 1e-5};
    const int intervals[] = {kRefactorInterval, 16, 4};
    for (int attempt = 0; attempt < 3; ++attempt) {
      try {
        Simplex simplex(lp, tol, pivot_tols[attempt], intervals[attempt]);
        sol = simplex.run();
      } catch (const FactorizationError&) {
        sol = LPSolution{};
        sol.status = Status::kNumericalFailure;
        continue;
      }
      if (sol.status != Status::kOptimal) {
        if (sol.status == Status::kNumericalFailure) continue;
        break;
      }
      sol.diagnostics = evaluate(lp, sol);
      if (sol.diagnostics.duality_gap <= tol.duality_gap &&
          sol.diagnostics.complementary_slackness <= tol.complementary_slackness) {
        break;
      }
      sol.status = Status::kNumericalFailure;
    }
  }
  if (sol.status == Status::kOptimal && lp.num_constraints() == 0) {
    sol.diagnostics = evaluate(lp, sol);
  }
  if (sol.status == Status::kOptimal) {
    sol.row_activity.resize(lp.num_constraints());
  }
  return sol;
}

}  // namespace gridclear::lp
