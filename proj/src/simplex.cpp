#include "egotime/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "egotime/errors.hpp"

namespace egotime {

namespace {

// Elements below this magnitude are treated as zero during pivoting.
constexpr double kPivotTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

// How one original variable maps onto the nonnegative standard-form columns.
struct VarMap {
  enum class Kind { kShift, kMirror, kSplit } kind;
  double offset = 0.0;
  std::size_t col = 0;
  std::size_t col_neg = 0;  // kSplit only
};

struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // excluding the rhs column
  std::vector<double> a;
  std::vector<double> b;
  std::vector<std::size_t> basis;
  std::vector<char> enterable;
  std::vector<double> cost;    // reduced costs of the current phase
  double objective = 0.0;      // current phase objective value
  std::size_t iterations = 0;

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  void pivot(std::size_t r, std::size_t s) {
    const double p = at(r, s);
    for (std::size_t j = 0; j < cols; ++j) at(r, j) /= p;
    b[r] /= p;
    at(r, s) = 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = at(i, s);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) at(i, j) -= f * at(r, j);
      b[i] -= f * b[r];
      at(i, s) = 0.0;
    }
    const double cf = cost[s];
    if (cf != 0.0) {
      objective += cf * b[r];
      for (std::size_t j = 0; j < cols; ++j) cost[j] -= cf * at(r, j);
      cost[s] = 0.0;
    }
    basis[r] = s;
    ++iterations;
  }

  void dump(std::ostream& os, const char* phase) const {
    os << "[simplex] " << phase << " iteration " << iterations
       << " objective " << objective << '\n';
    os << "  cost:";
    for (double c : cost) os << ' ' << c;
    os << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
      os << "  row " << i << " (basic " << basis[i] << "):";
      for (std::size_t j = 0; j < cols; ++j) os << ' ' << at(i, j);
      os << " | " << b[i] << '\n';
    }
  }
};

enum class PhaseResult { kOptimal, kUnbounded };

// Bland's rule: entering column is the lowest-index one with a negative
// reduced cost; on ratio ties the leaving row is the one whose basic
// variable has the lowest index. Guarantees termination on degenerate
// problems at the cost of speed, which does not matter at this scale.
PhaseResult run_phase(Tableau& t, const char* phase, std::size_t max_iters,
                      std::ostream* trace) {
  for (;;) {
    std::size_t enter = t.cols;
    for (std::size_t j = 0; j < t.cols; ++j) {
      if (t.enterable[j] && t.cost[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == t.cols) return PhaseResult::kOptimal;

    std::size_t leave = t.rows;
    double best = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i) {
      const double aij = t.at(i, enter);
      if (aij <= kPivotTol) continue;
      const double ratio = t.b[i] / aij;
      if (leave == t.rows) {
        best = ratio;
        leave = i;
        continue;
      }
      const double tie = 1e-12 * (1.0 + std::abs(best));
      if (ratio < best - tie) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + tie && t.basis[i] < t.basis[leave]) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave == t.rows) return PhaseResult::kUnbounded;

    t.pivot(leave, enter);
    if (trace) t.dump(*trace, phase);
    if (t.iterations > max_iters)
      throw std::runtime_error("simplex exceeded its iteration budget");
  }
}

void validate(const LpProblem& p) {
  const std::size_t n = p.num_variables();
  const std::size_t m = p.num_constraints();
  require(p.senses.size() == m, "senses size differs from constraint count");
  require(p.rhs.size() == m, "rhs size differs from constraint count");
  require(p.lower_bounds.empty() || p.lower_bounds.size() == n,
          "lower_bounds size differs from variable count");
  require(p.upper_bounds.empty() || p.upper_bounds.size() == n,
          "upper_bounds size differs from variable count");
  for (double c : p.objective)
    require(std::isfinite(c), "objective coefficients must be finite");
  for (const auto& row : p.constraint_matrix) {
    require(row.size() == n, "constraint row size differs from variable count");
    for (double v : row)
      require(std::isfinite(v), "constraint coefficients must be finite");
  }
  for (double v : p.rhs)
    require(std::isfinite(v), "right-hand sides must be finite");
  for (std::size_t j = 0; j < n; ++j) {
    const double lb = p.lower_bounds.empty() ? 0.0 : p.lower_bounds[j];
    const double ub = p.upper_bounds.empty() ? kInf : p.upper_bounds[j];
    require(!std::isnan(lb) && !std::isnan(ub), "variable bounds must not be NaN");
    require(lb < kInf && ub > -kInf, "variable bounds must leave a feasible range");
    require(lb <= ub, "lower bound exceeds upper bound");
  }
}

}  // namespace

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

LpSolution solve_lp(const LpProblem& problem, std::ostream* trace) {
  validate(problem);

  const std::size_t n = problem.num_variables();
  const std::size_t m = problem.num_constraints();
  const bool maximize = problem.direction == OptimizeDirection::kMaximize;

  // Rewrite every variable as a nonnegative standard-form column.
  std::vector<VarMap> var_maps(n);
  std::vector<double> std_cost;           // phase-2 cost per structural column
  std::vector<std::size_t> bound_row_col; // columns needing an upper-bound row
  std::vector<double> bound_row_rhs;
  for (std::size_t j = 0; j < n; ++j) {
    const double lb = problem.lower_bounds.empty() ? 0.0 : problem.lower_bounds[j];
    const double ub = problem.upper_bounds.empty() ? kInf : problem.upper_bounds[j];
    const double c = maximize ? -problem.objective[j] : problem.objective[j];
    if (lb > -kInf) {
      var_maps[j] = {VarMap::Kind::kShift, lb, std_cost.size(), 0};
      std_cost.push_back(c);
      if (ub < kInf) {
        bound_row_col.push_back(var_maps[j].col);
        bound_row_rhs.push_back(ub - lb);
      }
    } else if (ub < kInf) {
      var_maps[j] = {VarMap::Kind::kMirror, ub, std_cost.size(), 0};
      std_cost.push_back(-c);
    } else {
      var_maps[j] = {VarMap::Kind::kSplit, 0.0, std_cost.size(),
                     std_cost.size() + 1};
      std_cost.push_back(c);
      std_cost.push_back(-c);
    }
  }
  const std::size_t n_struct = std_cost.size();

  // Assemble rows over the structural columns, substituting shifted and
  // mirrored variables so that every right-hand side refers to x' >= 0.
  struct Row {
    std::vector<double> coeff;
    ConstraintSense sense;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(m + bound_row_col.size());
  for (std::size_t i = 0; i < m; ++i) {
    Row row{std::vector<double>(n_struct, 0.0), problem.senses[i],
            problem.rhs[i]};
    for (std::size_t j = 0; j < n; ++j) {
      const double aij = problem.constraint_matrix[i][j];
      if (aij == 0.0) continue;
      const VarMap& vm = var_maps[j];
      switch (vm.kind) {
        case VarMap::Kind::kShift:
          row.coeff[vm.col] += aij;
          row.rhs -= aij * vm.offset;
          break;
        case VarMap::Kind::kMirror:
          row.coeff[vm.col] -= aij;
          row.rhs -= aij * vm.offset;
          break;
        case VarMap::Kind::kSplit:
          row.coeff[vm.col] += aij;
          row.coeff[vm.col_neg] -= aij;
          break;
      }
    }
    rows.push_back(std::move(row));
  }
  for (std::size_t k = 0; k < bound_row_col.size(); ++k) {
    Row row{std::vector<double>(n_struct, 0.0), ConstraintSense::kLessEqual,
            bound_row_rhs[k]};
    row.coeff[bound_row_col[k]] = 1.0;
    rows.push_back(std::move(row));
  }

  double max_abs_rhs = 0.0;
  for (Row& row : rows) {
    if (row.rhs < 0.0) {
      for (double& v : row.coeff) v = -v;
      row.rhs = -row.rhs;
      if (row.sense == ConstraintSense::kLessEqual)
        row.sense = ConstraintSense::kGreaterEqual;
      else if (row.sense == ConstraintSense::kGreaterEqual)
        row.sense = ConstraintSense::kLessEqual;
    }
    max_abs_rhs = std::max(max_abs_rhs, row.rhs);
  }

  // Slack / surplus columns, then artificials for rows without a natural
  // basic column.
  const std::size_t n_rows = rows.size();
  std::size_t n_slack = 0;
  for (const Row& row : rows)
    if (row.sense != ConstraintSense::kEqual) ++n_slack;
  std::size_t n_art = 0;
  for (const Row& row : rows)
    if (row.sense != ConstraintSense::kLessEqual) ++n_art;
  const std::size_t art_start = n_struct + n_slack;

  Tableau t;
  t.rows = n_rows;
  t.cols = n_struct + n_slack + n_art;
  t.a.assign(t.rows * t.cols, 0.0);
  t.b.resize(n_rows);
  t.basis.assign(n_rows, 0);
  t.enterable.assign(t.cols, 1);

  std::size_t slack_col = n_struct;
  std::size_t art_col = art_start;
  for (std::size_t i = 0; i < n_rows; ++i) {
    const Row& row = rows[i];
    for (std::size_t j = 0; j < n_struct; ++j) t.at(i, j) = row.coeff[j];
    t.b[i] = row.rhs;
    switch (row.sense) {
      case ConstraintSense::kLessEqual:
        t.at(i, slack_col) = 1.0;
        t.basis[i] = slack_col++;
        break;
      case ConstraintSense::kGreaterEqual:
        t.at(i, slack_col) = -1.0;
        ++slack_col;
        t.at(i, art_col) = 1.0;
        t.basis[i] = art_col++;
        break;
      case ConstraintSense::kEqual:
        t.at(i, art_col) = 1.0;
        t.basis[i] = art_col++;
        break;
    }
  }

  const std::size_t max_iters = 10000 + 200 * (t.rows + t.cols);

  LpSolution solution;

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    // Artificials may leave the basis but never re-enter.
    for (std::size_t j = art_start; j < t.cols; ++j) t.enterable[j] = 0;
    t.cost.assign(t.cols, 0.0);
    for (std::size_t j = art_start; j < t.cols; ++j) t.cost[j] = 1.0;
    t.objective = 0.0;
    for (std::size_t i = 0; i < n_rows; ++i) {
      if (t.basis[i] < art_start) continue;
      for (std::size_t j = 0; j < t.cols; ++j) t.cost[j] -= t.at(i, j);
      t.objective += t.b[i];
    }
    if (trace) t.dump(*trace, "phase1-start");
    const PhaseResult r = run_phase(t, "phase1", max_iters, trace);
    if (r == PhaseResult::kUnbounded)
      throw std::runtime_error("phase 1 reported an unbounded problem");
    const double feas_tol = 1e-8 * (1.0 + max_abs_rhs);
    if (t.objective > feas_tol) {
      solution.status = LpStatus::kInfeasible;
      solution.iterations = t.iterations;
      return solution;
    }
    // Pivot leftover artificials out of the basis; rows that cannot release
    // one are redundant combinations of other rows.
    for (std::size_t i = 0; i < n_rows; ++i) {
      if (t.basis[i] < art_start) continue;
      std::size_t s = art_start;
      for (std::size_t j = 0; j < art_start; ++j) {
        if (std::abs(t.at(i, j)) > kPivotTol) {
          s = j;
          break;
        }
      }
      if (s < art_start) t.pivot(i, s);
    }
  }

  // Phase 2 over structural and slack columns only.
  std::vector<char> keep_row(n_rows, 1);
  for (std::size_t i = 0; i < n_rows; ++i)
    if (t.basis[i] >= art_start) keep_row[i] = 0;  // redundant row

  Tableau t2;
  t2.cols = art_start;
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (!keep_row[i]) continue;
    for (std::size_t j = 0; j < art_start; ++j) t2.a.push_back(t.at(i, j));
    t2.b.push_back(t.b[i]);
    t2.basis.push_back(t.basis[i]);
  }
  t2.rows = t2.b.size();
  t2.enterable.assign(t2.cols, 1);
  t2.iterations = t.iterations;
  t2.cost.assign(t2.cols, 0.0);
  for (std::size_t j = 0; j < n_struct; ++j) t2.cost[j] = std_cost[j];
  t2.objective = 0.0;
  for (std::size_t i = 0; i < t2.rows; ++i) {
    const std::size_t bj = t2.basis[i];
    const double cb = bj < n_struct ? std_cost[bj] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < t2.cols; ++j) t2.cost[j] -= cb * t2.at(i, j);
    t2.cost[bj] = 0.0;
    t2.objective += cb * t2.b[i];
  }
  if (trace) t2.dump(*trace, "phase2-start");
  const PhaseResult r2 = run_phase(t2, "phase2", max_iters, trace);
  solution.iterations = t2.iterations;
  if (r2 == PhaseResult::kUnbounded) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }

  // Recover the original variables from the standard-form point.
  std::vector<double> std_values(t2.cols, 0.0);
  for (std::size_t i = 0; i < t2.rows; ++i) std_values[t2.basis[i]] = t2.b[i];
  solution.variable_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const VarMap& vm = var_maps[j];
    switch (vm.kind) {
      case VarMap::Kind::kShift:
        solution.variable_values[j] = vm.offset + std_values[vm.col];
        break;
      case VarMap::Kind::kMirror:
        solution.variable_values[j] = vm.offset - std_values[vm.col];
        break;
      case VarMap::Kind::kSplit:
        solution.variable_values[j] =
            std_values[vm.col] - std_values[vm.col_neg];
        break;
    }
  }
  solution.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    solution.objective += problem.objective[j] * solution.variable_values[j];
  solution.status = LpStatus::kOptimal;
  return solution;
}

}  // namespace egotime
