#include "kocrs/policy.hpp"

#include "kocrs/error.hpp"

namespace kocrs {

namespace {

void check_gamma(const Rational& gamma) {
  if (gamma.sign() <= 0 || gamma > Rational(1)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0,1], got " + gamma.str());
  }
}

// Builds the threshold-form rule: 1 above `threshold`, `q` at it, 0 below.
AttemptRule threshold_rule(const KnapsackState& state, const Rational& threshold,
                           const Rational& q) {
  AttemptRule rule;
  rule.threshold = threshold;
  rule.boundary_prob = q;
  for (const auto& [w, mass] : state.alive) {
    if (w > threshold) {
      rule.attempt_prob.emplace_hint(rule.attempt_prob.end(), w, Rational(1));
    } else if (w == threshold) {
      rule.attempt_prob.emplace_hint(rule.attempt_prob.end(), w, q);
    } else {
      rule.attempt_prob.emplace_hint(rule.attempt_prob.end(), w, Rational());
    }
  }
  return rule;
}

}  // namespace

KnapsackState KnapsackState::initial(Setting setting) {
  KnapsackState s;
  s.setting = setting;
  s.alive.emplace(Rational(), Rational(1));
  return s;
}

Rational KnapsackState::mass_at(const Rational& usage) const {
  const auto it = alive.find(usage);
  return it == alive.end() ? Rational() : it->second;
}

Rational KnapsackState::alive_mass() const {
  Rational acc;
  for (const auto& [w, mass] : alive) acc += mass;
  return acc;
}

Rational KnapsackState::expected_usage() const {
  Rational acc = closed_usage;
  for (const auto& [w, mass] : alive) acc += w * mass;
  return acc;
}

Rational KnapsackState::mass_at_or_above_one() const {
  Rational acc = closed_mass;
  for (auto it = alive.lower_bound(Rational(1)); it != alive.end(); ++it) acc += it->second;
  return acc;
}

KnapsackState reserved_initial_state(const Rational& gamma, const Rational& epsilon) {
  if (gamma.sign() < 0 || gamma > Rational(1) || epsilon.sign() <= 0) {
    throw Error(ErrorCode::InvalidArgument, "reserved start needs gamma in [0,1], epsilon > 0");
  }
  KnapsackState s;
  s.setting = Setting::Hard;
  if (gamma < Rational(1)) s.alive.emplace(Rational(), Rational(1) - gamma);
  if (gamma.sign() > 0) s.alive.emplace(epsilon, gamma);
  return s;
}

Rational AttemptRule::at(const Rational& usage) const {
  const auto it = attempt_prob.find(usage);
  if (it == attempt_prob.end()) {
    throw Error(ErrorCode::RuleDomainMismatch, "no attempt probability for usage " + usage.str());
  }
  return it->second;
}

AttemptRule greedy_rule(const KnapsackState& state) {
  AttemptRule rule;
  for (const auto& [w, mass] : state.alive) {
    rule.attempt_prob.emplace_hint(rule.attempt_prob.end(), w, Rational(1));
  }
  return rule;
}

RuleOutcome aggressive_rule(const KnapsackState& state, const SizeDistribution& item,
                            const Rational& gamma) {
  check_gamma(gamma);
  const Rational one(1);
  Rational running;
  for (auto it = state.alive.rbegin(); it != state.alive.rend(); ++it) {
    const auto& [w, mass] = *it;
    const Rational weight =
        state.setting == Setting::Hard ? mass * item.cdf(one - w) : mass;
    running += weight;
    if (running >= gamma) {
      const Rational above = running - weight;
      const Rational q = weight.is_zero() ? Rational() : (gamma - above) / weight;
      return threshold_rule(state, w, q);
    }
  }
  return FeasibilityFailure{0, running};
}

RuleOutcome reserved_rule(const KnapsackState& state, const Rational& p_one,
                          const Rational& gamma) {
  check_gamma(gamma);
  if (p_one.sign() < 0 || p_one > Rational(1)) {
    throw Error(ErrorCode::InvalidArgument, "p_one must lie in [0,1]");
  }
  const Rational one(1);
  const Rational denom = one - p_one + p_one * p_one;
  const Rational mid_prob = (one - p_one) / denom;
  const Rational needed = gamma * p_one / denom;
  const Rational zero_mass = state.mass_at(Rational());
  if (zero_mass < needed) {
    Rational mid_mass;
    for (const auto& [w, mass] : state.alive) {
      if (w.sign() > 0 && w < one) mid_mass += mass;
    }
    return FeasibilityFailure{0, mid_mass * mid_prob * (one - p_one) + zero_mass};
  }
  const Rational zero_prob = needed.is_zero() ? Rational() : needed / zero_mass;

  AttemptRule rule;
  for (const auto& [w, mass] : state.alive) {
    Rational a;
    if (w.is_zero()) {
      a = zero_prob;
    } else if (w < one) {
      a = mid_prob;
    }
    rule.attempt_prob.emplace_hint(rule.attempt_prob.end(), w, std::move(a));
  }
  return rule;
}

StepResult step_exact(const KnapsackState& state, const SizeDistribution& item,
                      const AttemptRule& rule) {
  if (rule.attempt_prob.size() != state.alive.size()) {
    throw Error(ErrorCode::RuleDomainMismatch, "rule and state have different atom sets");
  }
  const Rational one(1);
  StepResult out;
  out.state.setting = state.setting;
  out.state.closed_mass = state.closed_mass;
  out.state.closed_usage = state.closed_usage;
  auto& next = out.state.alive;

  auto rule_it = rule.attempt_prob.begin();
  for (const auto& [w, mass] : state.alive) {
    if (rule_it->first != w) {
      throw Error(ErrorCode::RuleDomainMismatch, "rule misses usage atom " + w.str());
    }
    const Rational& a = rule_it->second;
    ++rule_it;
    if (a < one) {
      Rational stay = mass * (one - a);
      if (!stay.is_zero()) next[w] += stay;
    }
    if (a.is_zero()) continue;
    const Rational attempted = mass * a;
    for (const auto& atom : item.atoms()) {
      const Rational m = attempted * atom.prob;
      Rational u = w + atom.size;
      if (state.setting == Setting::Hard) {
        if (u <= one) {
          out.accept_prob += m;
          next[std::move(u)] += m;
        } else {
          out.state.closed_mass += m;
          out.state.closed_usage += m * w;
        }
      } else {
        out.accept_prob += m;
        if (u < one) {
          next[std::move(u)] += m;
        } else {
          out.state.closed_mass += m;
          out.state.closed_usage += m * u;
        }
      }
    }
  }
  return out;
}

Rational f_ratio(const Rational& p) {
  const Rational one(1);
  return p / (one - p + p * p);
}

}  // namespace kocrs
