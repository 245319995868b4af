#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace egotime {

enum class ConstraintSense { kLessEqual, kGreaterEqual, kEqual };
enum class OptimizeDirection { kMinimize, kMaximize };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string_view to_string(LpStatus status);

/// A dense LP in general form:
///
///   min / max  c . x
///   subject to A_i . x  (<= | >= | =)  b_i   for every row i
///              lb_j <= x_j <= ub_j           for every variable j
///
/// Empty bound vectors mean the defaults: lower 0, upper +infinity.
/// Infinite bounds are legal; objective, matrix and right-hand sides
/// must be finite.
struct LpProblem {
  OptimizeDirection direction = OptimizeDirection::kMinimize;
  std::vector<double> objective;
  std::vector<std::vector<double>> constraint_matrix;
  std::vector<ConstraintSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower_bounds;  // empty => all zero
  std::vector<double> upper_bounds;  // empty => all +infinity

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_constraints() const { return constraint_matrix.size(); }
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> variable_values;
  std::size_t iterations = 0;
};

/// Two-phase dense simplex with Bland's anti-cycling rule. Deterministic:
/// a given problem always produces the same pivot sequence and solution.
/// Pass a stream to dump the tableau after every pivot.
LpSolution solve_lp(const LpProblem& problem, std::ostream* trace = nullptr);

}  // namespace egotime
