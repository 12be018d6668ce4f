#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the evaluation or LP code paths they check.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "kocrs/distribution.hpp"
#include "kocrs/evaluation.hpp"
#include "kocrs/lp.hpp"
#include "kocrs/osgap.hpp"
#include "kocrs/policy.hpp"
#include "kocrs/rational.hpp"

namespace kocrs::oracle {

/// Greedy per-item acceptance by enumerating every joint size vector and
/// replaying the deterministic greedy path on each.
inline std::vector<Rational> greedy_by_enumeration(const KocrsInstance& inst) {
  const std::size_t n = inst.items.size();
  std::vector<Rational> accept(n);
  std::vector<std::size_t> idx(n, 0);
  const Rational one(1);
  for (;;) {
    Rational prob(1);
    for (std::size_t i = 0; i < n; ++i) prob *= inst.items[i].atoms()[idx[i]].prob;
    Rational usage;
    bool open = true;
    for (std::size_t i = 0; i < n && open; ++i) {
      const Rational s = inst.items[i].atoms()[idx[i]].size;
      if (inst.setting == Setting::Hard) {
        if (usage + s <= one) {
          usage += s;
          accept[i] += prob;
        } else {
          open = false;
        }
      } else {
        accept[i] += prob;
        usage += s;
        if (usage >= one) open = false;
      }
    }
    std::size_t i = 0;
    while (i < n && ++idx[i] == inst.items[i].support_size()) idx[i++] = 0;
    if (i == n) break;
  }
  return accept;
}

/// Replays fixed per-item rules (attempt probability per usage) over every
/// sample path: each branch is (attempt or not) x (size atom). Returns the
/// per-item acceptance and the alive usage law after each item.
struct PathReplay {
  std::vector<Rational> accept;
  std::vector<std::map<Rational, Rational>> alive_after;
};

inline PathReplay replay_paths(const KocrsInstance& inst, const std::map<Rational, Rational>& start,
                               const std::vector<AttemptRule>& rules) {
  PathReplay out;
  const Rational one(1);
  // Paths are tracked individually in a list; merging is left to the caller.
  struct Path {
    Rational usage, prob;
  };
  std::vector<Path> paths;
  for (const auto& [w, p] : start) paths.push_back({w, p});
  for (std::size_t i = 0; i < rules.size(); ++i) {
    std::vector<Path> next;
    Rational accepted;
    for (const auto& path : paths) {
      const Rational a = rules[i].attempt_prob.at(path.usage);
      if (a != one) next.push_back({path.usage, path.prob * (one - a)});
      if (a.is_zero()) continue;
      for (const auto& atom : inst.items[i].atoms()) {
        const Rational p = path.prob * a * atom.prob;
        const Rational u = path.usage + atom.size;
        const bool hard = inst.setting == Setting::Hard;
        if (hard ? u <= one : true) accepted += p;
        const bool alive = hard ? u <= one : u < one;
        if (alive) next.push_back({u, p});
      }
    }
    std::map<Rational, Rational> law;
    for (const auto& p : next) {
      if (!p.prob.is_zero()) law[p.usage] += p.prob;
    }
    paths.clear();
    for (const auto& [w, p] : law) paths.push_back({w, p});
    out.accept.push_back(accepted);
    out.alive_after.push_back(std::move(law));
  }
  return out;
}

/// Threshold of the aggressive rule straight from its definition: the largest
/// alive usage theta with Pr[theta <= W, W + S fits] >= gamma (soft: the fit
/// condition is just "alive"), computed by a pairwise scan over (W, S) atoms.
struct ThresholdOracle {
  std::optional<Rational> theta;
  Rational q;
};

inline ThresholdOracle aggressive_threshold(const KnapsackState& state, const SizeDistribution& item,
                                            const Rational& gamma) {
  const Rational one(1);
  auto success_at = [&](const Rational& w) {
    Rational acc;
    const Rational mass = state.mass_at(w);
    if (state.setting == Setting::Soft) return mass;
    for (const auto& a : item.atoms()) {
      if (w + a.size <= one) acc += mass * a.prob;
    }
    return acc;
  };
  auto success_at_or_above = [&](const Rational& theta, bool strict) {
    Rational acc;
    for (const auto& [w, m] : state.alive) {
      if (strict ? w > theta : w >= theta) acc += success_at(w);
    }
    return acc;
  };
  ThresholdOracle out;
  for (const auto& [w, m] : state.alive) {
    if (success_at_or_above(w, false) >= gamma) out.theta = w;  // ascending scan keeps the largest
  }
  if (!out.theta) return out;
  const Rational above = success_at_or_above(*out.theta, true);
  const Rational at = success_at(*out.theta);
  out.q = at.is_zero() ? Rational() : (gamma - above) / at;
  return out;
}

/// Solves the square system A x = b exactly; empty when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                         std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r) {
      if (!a[r][c].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv == n) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
  return b;
}

inline bool feasible_point(const LinearProgram& lp, const std::vector<Rational>& x) {
  for (const auto& v : x) {
    if (v.sign() < 0) return false;
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    Rational lhs;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += lp.rows[r][j] * x[j];
    const int c = lhs == lp.rhs[r] ? 0 : (lhs < lp.rhs[r] ? -1 : 1);
    if (lp.senses[r] == RowSense::LessEqual && c > 0) return false;
    if (lp.senses[r] == RowSense::GreaterEqual && c < 0) return false;
    if (lp.senses[r] == RowSense::Equal && c != 0) return false;
  }
  return true;
}

/// Max of the objective over the vertices of {rows, x >= 0}, by trying every
/// choice of n tight constraints. Empty when no vertex exists (infeasible).
/// Only meaningful for bounded LPs.
inline std::optional<Rational> vertex_enumeration_max(const LinearProgram& lp) {
  const std::size_t n = lp.columns();
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    rows.push_back(lp.rows[r]);
    rhs.push_back(lp.rhs[r]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> e(n);
    e[j] = Rational(1);
    rows.push_back(std::move(e));
    rhs.push_back(Rational());
  }
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  // Every equality row must be tight.
  std::vector<std::size_t> forced, optional_rows;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r < lp.rows.size() && lp.senses[r] == RowSense::Equal) {
      forced.push_back(r);
    } else {
      optional_rows.push_back(r);
    }
  }
  if (forced.size() > n) return std::nullopt;
  const std::size_t k = n - forced.size();
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (pick.size() == k) {
      std::vector<std::vector<Rational>> a;
      std::vector<Rational> b;
      for (auto r : forced) {
        a.push_back(rows[r]);
        b.push_back(rhs[r]);
      }
      for (auto r : pick) {
        a.push_back(rows[r]);
        b.push_back(rhs[r]);
      }
      const auto x = solve_square(a, b);
      if (!x || !feasible_point(lp, *x)) return;
      Rational value;
      for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * (*x)[j];
      if (!best || value > *best) best = value;
      return;
    }
    for (std::size_t i = from; i < optional_rows.size(); ++i) {
      pick.push_back(optional_rows[i]);
      choose(i + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return best;
}

/// Dual of the OSGAP relaxation with the per-(item, type) multipliers
/// eliminated: g(lambda) = sum lambda_j + sum p_it max(0, max_j(v_itj - lambda_j s_itj)).
inline Rational osgap_dual_value(const OsgapInstance& inst, const std::vector<Rational>& lambda) {
  Rational g;
  for (const auto& l : lambda) g += l;
  for (const auto& item : inst.items) {
    for (const auto& type : item.types) {
      Rational best;
      for (std::size_t j = 0; j < inst.knapsacks; ++j) {
        best = max(best, type.values[j] - lambda[j] * type.dists[j].mean());
      }
      g += type.prob * best;
    }
  }
  return g;
}

/// min over lambda >= 0 of the dual function, by evaluating it at every
/// vertex of the arrangement of its breakpoint hyperplanes. Supports m <= 2.
inline Rational osgap_dual_min(const OsgapInstance& inst) {
  const std::size_t m = inst.knapsacks;
  // Lines a . lambda = c in R^m.
  struct Line {
    std::vector<Rational> a;
    Rational c;
  };
  std::vector<Line> lines;
  for (std::size_t j = 0; j < m; ++j) {
    Line l{std::vector<Rational>(m), Rational()};
    l.a[j] = Rational(1);
    lines.push_back(std::move(l));
  }
  for (const auto& item : inst.items) {
    for (const auto& type : item.types) {
      for (std::size_t j = 0; j < m; ++j) {
        const Rational s = type.dists[j].mean();
        if (!s.is_zero()) {  // v - lambda_j s = 0
          Line l{std::vector<Rational>(m), type.values[j]};
          l.a[j] = s;
          lines.push_back(std::move(l));
        }
        for (std::size_t k = j + 1; k < m; ++k) {  // v_j - l_j s_j = v_k - l_k s_k
          Line l{std::vector<Rational>(m), type.values[j] - type.values[k]};
          l.a[j] = s;
          l.a[k] = -type.dists[k].mean();
          if (!l.a[j].is_zero() || !l.a[k].is_zero()) lines.push_back(std::move(l));
        }
      }
    }
  }
  std::optional<Rational> best;
  auto consider = [&](const std::vector<Rational>& lambda) {
    for (const auto& l : lambda) {
      if (l.sign() < 0) return;
    }
    const Rational g = osgap_dual_value(inst, lambda);
    if (!best || g < *best) best = g;
  };
  if (m == 1) {
    for (const auto& l : lines) consider({l.c / l.a[0]});
  } else if (m == 2) {
    for (std::size_t x = 0; x < lines.size(); ++x) {
      for (std::size_t y = x + 1; y < lines.size(); ++y) {
        const auto sol = solve_square({lines[x].a, lines[y].a}, {lines[x].c, lines[y].c});
        if (sol) consider(*sol);
      }
    }
  }
  return best.value_or(Rational());
}

/// Second differences of f(p) = p / (1 - p + p^2) on the grid k * step; returns
/// the bracket [p_lo, p_hi] around the first sign change (convex to concave).
inline std::optional<std::pair<Rational, Rational>> f_inflection_bracket(const Rational& step) {
  auto f = [](const Rational& p) { return p / (Rational(1) - p + p * p); };
  std::optional<int> prev_sign;
  Rational prev_p;
  for (Rational p = step; p + step <= Rational(1); p += step) {
    const Rational d2 = f(p + step) - Rational(2) * f(p) + f(p - step);
    const int s = d2.sign();
    if (prev_sign && s != 0 && s != *prev_sign) return std::make_pair(prev_p, p);
    if (s != 0) {
      prev_sign = s;
      prev_p = p;
    }
  }
  return std::nullopt;
}

/// Exact expected value of the online rounding. Each knapsack's usage law only
/// sees the mixture sizes, so item i is assigned to j with probability
/// sum_w P_i(w) a_i(w) sum_t x_itj Pr[S_itj fits at w] (soft: every attempt fits).
inline Rational rounding_value_exact(const OsgapInstance& inst, const LpSolution& sol, const Rational& gamma,
                                     Policy policy, Setting setting) {
  const Rational one(1);
  Rational total;
  for (std::size_t j = 0; j < inst.knapsacks; ++j) {
    const auto trace = trace_exact(knapsack_instance(inst, sol, j, setting), policy, gamma);
    for (std::size_t i = 0; i < trace.rules.size(); ++i) {
      for (const auto& [w, mass] : trace.states[i].alive) {
        const Rational a = trace.rules[i].at(w);
        if (a.is_zero()) continue;
        for (std::size_t t = 0; t < inst.items[i].types.size(); ++t) {
          const auto& type = inst.items[i].types[t];
          const Rational fit = setting == Setting::Soft ? one : type.dists[j].cdf(one - w);
          total += mass * a * sol.x[inst.column(i, t, j)] * type.values[j] * fit;
        }
      }
    }
  }
  return total;
}

}  // namespace kocrs::oracle
