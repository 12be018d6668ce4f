#include "kocrs/lp.hpp"

#include "kocrs/error.hpp"

namespace kocrs {

void LinearProgram::add_row(std::vector<Rational> coefficients, RowSense sense, Rational bound) {
  if (coefficients.size() != objective.size()) {
    throw Error(ErrorCode::InvalidArgument, "row width does not match the objective");
  }
  rows.push_back(std::move(coefficients));
  senses.push_back(sense);
  rhs.push_back(std::move(bound));
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

class Tableau {
 public:
  std::vector<std::vector<Rational>> a;  // rows x cols
  std::vector<Rational> b;
  std::vector<std::size_t> basis;
  std::size_t cols = 0;

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = Rational(1) / a[r][c];
    for (auto& v : a[r]) {
      if (!v.is_zero()) v *= inv;
    }
    b[r] *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const Rational factor = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) {
        if (!a[r][j].is_zero()) a[i][j] -= factor * a[r][j];
      }
      b[i] -= factor * b[r];
    }
    basis[r] = c;
  }

  // Maximizes cost.x over the current basis using Bland's rule, restricted to
  // columns with allowed[c]. Returns false when unbounded.
  bool optimize(const std::vector<Rational>& cost, const std::vector<bool>& allowed) {
    std::vector<bool> in_basis(cols, false);
    for (;;) {
      std::fill(in_basis.begin(), in_basis.end(), false);
      for (auto c : basis) in_basis[c] = true;
      std::size_t entering = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allowed[j] || in_basis[j]) continue;
        Rational reduced = cost[j];
        for (std::size_t r = 0; r < a.size(); ++r) {
          if (!a[r][j].is_zero() && !cost[basis[r]].is_zero()) reduced -= cost[basis[r]] * a[r][j];
        }
        if (reduced.sign() > 0) {
          entering = j;
          break;
        }
      }
      if (entering == cols) return true;

      std::size_t leaving = a.size();
      Rational best_ratio;
      for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r][entering].sign() <= 0) continue;
        Rational ratio = b[r] / a[r][entering];
        if (leaving == a.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis[r] < basis[leaving])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      if (leaving == a.size()) return false;
      pivot(leaving, entering);
    }
  }

  void drop_row(std::size_t r) {
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(r));
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(r));
    basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
  }
};

}  // namespace

LpResult simplex_solve(const LinearProgram& lp) {
  const std::size_t n = lp.columns();
  const std::size_t m = lp.rows.size();
  if (lp.senses.size() != m || lp.rhs.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "row, sense and rhs counts differ");
  }

  // Normalize to non-negative right-hand sides.
  std::vector<std::vector<Rational>> rows = lp.rows;
  std::vector<RowSense> senses = lp.senses;
  std::vector<Rational> rhs = lp.rhs;
  for (std::size_t r = 0; r < m; ++r) {
    if (rows[r].size() != n) throw Error(ErrorCode::InvalidArgument, "ragged constraint row");
    if (rhs[r].sign() < 0) {
      for (auto& v : rows[r]) v = -v;
      rhs[r] = -rhs[r];
      if (senses[r] == RowSense::LessEqual) {
        senses[r] = RowSense::GreaterEqual;
      } else if (senses[r] == RowSense::GreaterEqual) {
        senses[r] = RowSense::LessEqual;
      }
    }
  }

  std::size_t slack_count = 0, artificial_count = 0;
  for (auto s : senses) {
    if (s != RowSense::Equal) ++slack_count;
    if (s != RowSense::LessEqual) ++artificial_count;
  }
  const std::size_t first_artificial = n + slack_count;
  Tableau t;
  t.cols = first_artificial + artificial_count;
  t.a.assign(m, std::vector<Rational>(t.cols));
  t.b = rhs;
  t.basis.assign(m, 0);
  std::size_t next_slack = n, next_art = first_artificial;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) t.a[r][j] = rows[r][j];
    switch (senses[r]) {
      case RowSense::LessEqual:
        t.a[r][next_slack] = Rational(1);
        t.basis[r] = next_slack++;
        break;
      case RowSense::GreaterEqual:
        t.a[r][next_slack++] = Rational(-1);
        t.a[r][next_art] = Rational(1);
        t.basis[r] = next_art++;
        break;
      case RowSense::Equal:
        t.a[r][next_art] = Rational(1);
        t.basis[r] = next_art++;
        break;
    }
  }

  LpResult result;
  if (artificial_count > 0) {
    std::vector<Rational> cost(t.cols);
    for (std::size_t j = first_artificial; j < t.cols; ++j) cost[j] = Rational(-1);
    t.optimize(cost, std::vector<bool>(t.cols, true));
    Rational infeasibility;
    for (std::size_t r = 0; r < t.a.size(); ++r) {
      if (t.basis[r] >= first_artificial) infeasibility += t.b[r];
    }
    if (infeasibility.sign() > 0) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (std::size_t r = t.a.size(); r-- > 0;) {
      if (t.basis[r] < first_artificial) continue;
      std::size_t col = first_artificial;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (!t.a[r][j].is_zero()) {
          col = j;
          break;
        }
      }
      if (col == first_artificial) {
        t.drop_row(r);
      } else {
        t.pivot(r, col);
      }
    }
  }

  std::vector<Rational> cost(t.cols);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
  std::vector<bool> allowed(t.cols, false);
  for (std::size_t j = 0; j < first_artificial; ++j) allowed[j] = true;
  if (!t.optimize(cost, allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x.assign(n, Rational());
  for (std::size_t r = 0; r < t.a.size(); ++r) {
    if (t.basis[r] < n) result.x[t.basis[r]] = t.b[r];
  }
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.objective[j] * result.x[j];
  return result;
}

bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.columns()) return false;
  for (const auto& v : x) {
    if (v.sign() < 0) return false;
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    Rational lhs;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += lp.rows[r][j] * x[j];
    switch (lp.senses[r]) {
      case RowSense::LessEqual:
        if (lhs > lp.rhs[r]) return false;
        break;
      case RowSense::GreaterEqual:
        if (lhs < lp.rhs[r]) return false;
        break;
      case RowSense::Equal:
        if (lhs != lp.rhs[r]) return false;
        break;
    }
  }
  return true;
}

}  // namespace kocrs
