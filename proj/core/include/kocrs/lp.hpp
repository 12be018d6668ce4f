#pragma once

#include <cstddef>
#include <vector>

#include "kocrs/rational.hpp"

namespace kocrs {

enum class RowSense { LessEqual, GreaterEqual, Equal };

/// max c.x  s.t.  rows[r].x (sense[r]) rhs[r],  x >= 0.  Dense, exact.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> rows;
  std::vector<RowSense> senses;
  std::vector<Rational> rhs;

  std::size_t columns() const { return objective.size(); }
  void add_row(std::vector<Rational> coefficients, RowSense sense, Rational bound);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> x;
  Rational objective;
};

/// Two-phase primal simplex on a dense rational tableau with Bland's
/// smallest-index rule for both entering and leaving variables.
LpResult simplex_solve(const LinearProgram& lp);

/// True iff `x` satisfies every row and x >= 0, checked exactly.
bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x);

}  // namespace kocrs
