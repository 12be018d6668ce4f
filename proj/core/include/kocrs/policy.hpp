#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <variant>

#include "kocrs/distribution.hpp"
#include "kocrs/rational.hpp"

namespace kocrs {

/// Exact distribution of the knapsack usage just before an item arrives.
///
/// `alive` holds the usage atoms on which the knapsack still accepts items;
/// `closed_mass` is the probability that the knapsack has stopped (an overflow
/// in the hard setting, usage reaching 1 in the soft setting). `closed_usage`
/// is the first moment of usage restricted to closed paths, so E[W] is
/// available exactly without keeping the closed atoms.
struct KnapsackState {
  Setting setting = Setting::Hard;
  std::map<Rational, Rational> alive;
  Rational closed_mass;
  Rational closed_usage;

  static KnapsackState initial(Setting setting);

  Rational mass_at(const Rational& usage) const;
  Rational alive_mass() const;
  Rational total_mass() const { return alive_mass() + closed_mass; }
  Rational expected_usage() const;
  /// Pr[usage >= 1], counting closed paths and alive atoms at exactly 1.
  Rational mass_at_or_above_one() const;
};

/// The reserved policy's starting law: a virtual item of size `epsilon`
/// inserted with probability `gamma`.
KnapsackState reserved_initial_state(const Rational& gamma, const Rational& epsilon);

/// Attempt probability per alive usage atom of the state it was built from.
/// Threshold-form rules also carry their threshold and boundary probability.
struct AttemptRule {
  std::map<Rational, Rational> attempt_prob;
  std::optional<Rational> threshold;
  std::optional<Rational> boundary_prob;

  Rational at(const Rational& usage) const;
};

struct FeasibilityFailure {
  std::size_t item_index = 0;  // 1-based once reported by the evaluator
  Rational max_achievable;

  friend bool operator==(const FeasibilityFailure&, const FeasibilityFailure&) = default;
};

using RuleOutcome = std::variant<AttemptRule, FeasibilityFailure>;

AttemptRule greedy_rule(const KnapsackState& state);

/// The gamma-aggressive threshold rule for the state's setting.
///
/// Alive atoms are scanned from the highest usage downwards, accumulating each
/// atom's success weight (its mass times the chance the item fits, or just its
/// mass in the soft setting) until the running total first reaches gamma. That
/// atom is the threshold; everything above it attempts with probability 1 and
/// the threshold atom attempts with the probability that makes acceptance
/// exactly gamma. When the whole scan stays below gamma the outcome is a
/// FeasibilityFailure carrying the largest achievable acceptance.
RuleOutcome aggressive_rule(const KnapsackState& state, const SizeDistribution& item,
                            const Rational& gamma);

/// The gamma-reserved rule for binary {epsilon, 1} sizes; `p_one` = Pr[size = 1].
RuleOutcome reserved_rule(const KnapsackState& state, const Rational& p_one,
                          const Rational& gamma);

struct StepResult {
  KnapsackState state;
  Rational accept_prob;
};

/// Exact one-item transition. Throws Error(RuleDomainMismatch) if `rule` is
/// not defined on exactly the alive atoms of `state`.
StepResult step_exact(const KnapsackState& state, const SizeDistribution& item,
                      const AttemptRule& rule);

/// p / (1 - p + p^2).
Rational f_ratio(const Rational& p);

}  // namespace kocrs
