#include "kocrs/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kocrs/error.hpp"
#include "kocrs/trials.hpp"

namespace kocrs {

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::Greedy: return "greedy";
    case Policy::Aggressive: return "aggressive";
    case Policy::Reserved: return "reserved";
  }
  return "unknown";
}

Policy parse_policy(const std::string& text) {
  if (text == "greedy") return Policy::Greedy;
  if (text == "aggressive") return Policy::Aggressive;
  if (text == "reserved") return Policy::Reserved;
  throw Error(ErrorCode::ParseError,
              "policy must be greedy, aggressive or reserved, got '" + text + "'");
}

Rational reserved_epsilon(const KocrsInstance& instance) {
  if (instance.setting != Setting::Hard) {
    throw Error(ErrorCode::PolicyPrecondition, "reserved policy is defined for the hard setting");
  }
  const Rational one(1);
  std::optional<Rational> eps;
  for (const auto& item : instance.items) {
    for (const auto& a : item.atoms()) {
      if (a.size == one) continue;
      if (a.size.is_zero() || (eps && *eps != a.size)) {
        throw Error(ErrorCode::PolicyPrecondition,
                    "reserved policy needs every size in {epsilon, 1}; found " + a.size.str());
      }
      eps = a.size;
    }
  }
  const Rational n1(static_cast<long>(instance.items.size() + 1));
  if (!eps) eps = one / (n1 + one);
  if (!(n1 * *eps < one)) {
    throw Error(ErrorCode::PolicyPrecondition,
                "reserved policy needs (n+1)*epsilon < 1; epsilon = " + eps->str());
  }
  return *eps;
}

ExactTrace trace_exact(const KocrsInstance& instance, Policy policy, const Rational& gamma) {
  ExactTrace trace;
  if (policy == Policy::Reserved) {
    const Rational eps = reserved_epsilon(instance);
    if (gamma.sign() <= 0 || gamma > Rational(1)) {
      throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0,1]");
    }
    trace.states.push_back(reserved_initial_state(gamma, eps));
  } else {
    trace.states.push_back(KnapsackState::initial(instance.setting));
  }

  const Rational one(1);
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    const auto& state = trace.states.back();
    const auto& item = instance.items[i];
    RuleOutcome outcome;
    switch (policy) {
      case Policy::Greedy: outcome = greedy_rule(state); break;
      case Policy::Aggressive: outcome = aggressive_rule(state, item, gamma); break;
      case Policy::Reserved: outcome = reserved_rule(state, item.prob_of(one), gamma); break;
    }
    if (auto* failure = std::get_if<FeasibilityFailure>(&outcome)) {
      failure->item_index = i + 1;
      trace.report.feasible = false;
      trace.report.failure = *failure;
      break;
    }
    auto& rule = std::get<AttemptRule>(outcome);
    StepResult step = step_exact(state, item, rule);
    if (step.state.alive.size() > kMaxAliveAtoms) {
      throw Error(ErrorCode::AtomExplosion,
                  "more than " + std::to_string(kMaxAliveAtoms) + " usage atoms after item " +
                      std::to_string(i + 1));
    }
    trace.report.per_item_accept.push_back(std::move(step.accept_prob));
    trace.rules.push_back(std::move(rule));
    trace.states.push_back(std::move(step.state));
  }
  trace.report.final_closed_mass = trace.states.back().closed_mass;
  return trace;
}

EvalReport evaluate_exact(const KocrsInstance& instance, Policy policy, const Rational& gamma) {
  return trace_exact(instance, policy, gamma).report;
}

namespace {

std::size_t sample_cdf(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return cdf.size() - 1;
  return static_cast<std::size_t>(it - cdf.begin());
}

std::vector<double> cumulative(const std::vector<Rational>& probs) {
  std::vector<double> cdf;
  cdf.reserve(probs.size());
  Rational acc;
  for (const auto& p : probs) {
    acc += p;
    cdf.push_back(acc.to_double());
  }
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

}  // namespace

std::size_t ScheduleStep::sample_size(double u) const { return sample_cdf(size_cdf, u); }

std::size_t Schedule::sample_initial(double u) const { return sample_cdf(initial_cdf, u); }

Schedule compile_schedule(const KocrsInstance& instance, Policy policy, const Rational& gamma) {
  ExactTrace trace = trace_exact(instance, policy, gamma);
  Schedule schedule;
  {
    std::vector<Rational> probs;
    for (const auto& [w, mass] : trace.states.front().alive) probs.push_back(mass);
    schedule.initial_cdf = cumulative(probs);
  }
  const Rational one(1);
  for (std::size_t i = 0; i < trace.rules.size(); ++i) {
    const auto& state = trace.states[i];
    const auto& next = trace.states[i + 1];
    const auto& rule = trace.rules[i];
    const auto& item = instance.items[i];

    std::vector<Rational> next_usages;
    next_usages.reserve(next.alive.size());
    for (const auto& [w, mass] : next.alive) next_usages.push_back(w);
    auto index_of = [&](const Rational& u) -> std::int32_t {
      const auto it = std::lower_bound(next_usages.begin(), next_usages.end(), u);
      if (it == next_usages.end() || *it != u) return ScheduleStep::kClosed;
      return static_cast<std::int32_t>(it - next_usages.begin());
    };

    ScheduleStep step;
    step.atom_count = state.alive.size();
    std::vector<Rational> size_probs;
    for (const auto& a : item.atoms()) size_probs.push_back(a.prob);
    step.size_cdf = cumulative(size_probs);
    const std::size_t sizes = item.support_size();
    step.dest.assign(step.atom_count * sizes, ScheduleStep::kClosed);
    step.accepted.assign(step.atom_count * sizes, 0);
    std::size_t k = 0;
    for (const auto& [w, mass] : state.alive) {
      step.usages.push_back(w);
      const Rational& a = rule.at(w);
      step.attempt.push_back(a.to_double());
      step.stay.push_back(index_of(w));
      for (std::size_t s = 0; s < sizes; ++s) {
        const Rational u = w + item.atoms()[s].size;
        const std::size_t cell = k * sizes + s;
        if (instance.setting == Setting::Hard) {
          if (u <= one) {
            step.accepted[cell] = 1;
            step.dest[cell] = index_of(u);
          }
        } else {
          step.accepted[cell] = 1;
          if (u < one) step.dest[cell] = index_of(u);
        }
      }
      ++k;
    }
    schedule.steps.push_back(std::move(step));
  }
  schedule.report = std::move(trace.report);
  return schedule;
}

McReport simulate(const KocrsInstance& instance, Policy policy, const Rational& gamma,
                  std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  const Schedule schedule = compile_schedule(instance, policy, gamma);
  if (!schedule.report.feasible) {
    throw Error(ErrorCode::Infeasible,
                std::string(to_string(policy)) + " policy infeasible at item " +
                    std::to_string(schedule.report.failure->item_index));
  }
  McReport report;
  report.trials = trials;
  report.seed = seed;
  if (trials == 0) return report;
  const std::size_t n = instance.items.size();

  using Counts = std::vector<std::uint64_t>;
  const Counts counts = run_chunked(
      static_cast<std::size_t>(trials), Counts(n, 0),
      [&](std::size_t first, std::size_t last, Counts& acc) {
        for (std::size_t t = first; t < last; ++t) {
          TrialRng rng(seed, t);
          std::size_t atom = schedule.sample_initial(rng.uniform());
          for (std::size_t i = 0; i < n; ++i) {
            const auto& step = schedule.steps[i];
            const double u_attempt = rng.uniform();
            const double u_size = rng.uniform();
            if (u_attempt < step.attempt[atom]) {
              const std::size_t cell = atom * step.size_count() + step.sample_size(u_size);
              if (step.accepted[cell]) ++acc[i];
              const std::int32_t d = step.dest[cell];
              if (d == ScheduleStep::kClosed) break;
              atom = static_cast<std::size_t>(d);
            } else {
              atom = static_cast<std::size_t>(step.stay[atom]);
            }
          }
        }
      },
      [](Counts& total, const Counts& part) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
      },
      threads);

  const double tr = static_cast<double>(trials);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = static_cast<double>(counts[i]) / tr;
    report.per_item_accept_freq.push_back(p);
    report.std_err.push_back(std::sqrt(p * (1.0 - p) / tr));
  }
  return report;
}

GammaSearch max_feasible_gamma(const KocrsInstance& instance, Policy policy,
                               const Rational& grid_step, const Rational& refine_tol) {
  if (grid_step.sign() <= 0 || refine_tol.sign() <= 0) {
    throw Error(ErrorCode::InvalidArgument, "grid step and refine tolerance must be positive");
  }
  const Rational one(1);
  auto feasible = [&](const Rational& g) { return evaluate_exact(instance, policy, g).feasible; };

  GammaSearch search;
  std::optional<std::size_t> best;
  bool seen_infeasible = false;
  for (Rational g = grid_step; g <= one; g += grid_step) {
    const bool ok = feasible(g);
    if (ok && seen_infeasible) search.monotone = false;
    if (!ok) seen_infeasible = true;
    if (ok) best = search.grid.size();
    search.grid.push_back({g, ok});
  }

  Rational lo = best ? search.grid[*best].gamma : Rational();
  Rational hi = min(lo + grid_step, one);
  if (hi == lo) {
    search.max_gamma = lo;
    return search;
  }
  if (hi == one && feasible(one)) {
    search.max_gamma = one;
    return search;
  }
  const Rational two(2);
  while (hi - lo > refine_tol) {
    const Rational mid = (lo + hi) / two;
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  search.max_gamma = lo;
  return search;
}

namespace {

template <class Scalar>
RenewalEstimate renewal_run(const std::vector<std::vector<Scalar>>& sizes,
                            const std::vector<std::vector<double>>& cdfs, const Scalar& one,
                            std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  struct Acc {
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
  };
  const std::size_t n = sizes.size();
  const Acc acc = run_chunked(
      static_cast<std::size_t>(trials), Acc{},
      [&](std::size_t first, std::size_t last, Acc& a) {
        std::vector<Scalar> x(n), x_prime(n);
        for (std::size_t t = first; t < last; ++t) {
          TrialRng rng(seed, t);
          for (std::size_t i = 0; i < n; ++i) x[i] = sizes[i][sample_cdf(cdfs[i], rng.uniform())];
          for (std::size_t i = 0; i < n; ++i) {
            x_prime[i] = sizes[i][sample_cdf(cdfs[i], rng.uniform())];
          }
          std::uint64_t count = 1;
          Scalar sum{};
          std::size_t k = n;
          for (std::size_t i = 0; i < n; ++i) {
            sum += x[i];
            if (sum > one) {
              k = i;
              break;
            }
          }
          while (k < n) {
            ++count;
            sum = x_prime[k];
            std::size_t next = n;
            for (std::size_t i = k + 1; i < n; ++i) {
              sum += x[i];
              if (sum > one) {
                next = i;
                break;
              }
            }
            k = next;
          }
          a.sum += count;
          a.sum_sq += count * count;
        }
      },
      [](Acc& total, const Acc& part) {
        total.sum += part.sum;
        total.sum_sq += part.sum_sq;
      },
      threads);

  RenewalEstimate est;
  est.trials = trials;
  if (trials == 0) return est;
  const double tr = static_cast<double>(trials);
  est.mean = static_cast<double>(acc.sum) / tr;
  const double var = std::max(0.0, static_cast<double>(acc.sum_sq) / tr - est.mean * est.mean);
  est.std_err = trials > 1 ? std::sqrt(var * tr / (tr - 1.0) / tr) : 0.0;
  return est;
}

}  // namespace

RenewalEstimate estimate_renewal_T(const KocrsInstance& instance, std::uint64_t trials,
                                   std::uint64_t seed, unsigned threads) {
  std::vector<Rational> all_sizes;
  std::vector<std::vector<double>> cdfs;
  for (const auto& item : instance.items) {
    std::vector<Rational> probs;
    for (const auto& a : item.atoms()) {
      all_sizes.push_back(a.size);
      probs.push_back(a.prob);
    }
    cdfs.push_back(cumulative(probs));
  }
  // Sums stay below 2n+1 units, so a common denominator under this bound keeps
  // the integer path exact.
  const std::int64_t limit =
      std::numeric_limits<std::int64_t>::max() / static_cast<std::int64_t>(2 * instance.items.size() + 2);
  const std::int64_t scale = common_denominator(all_sizes, limit);
  if (scale > 0) {
    std::vector<std::vector<std::int64_t>> sizes;
    for (const auto& item : instance.items) {
      auto& row = sizes.emplace_back();
      for (const auto& a : item.atoms()) {
        row.push_back((a.size * Rational(scale)).numerator().get_si());
      }
    }
    return renewal_run<std::int64_t>(sizes, cdfs, scale, trials, seed, threads);
  }
  std::vector<std::vector<Rational>> sizes;
  for (const auto& item : instance.items) {
    auto& row = sizes.emplace_back();
    for (const auto& a : item.atoms()) row.push_back(a.size);
  }
  return renewal_run<Rational>(sizes, cdfs, Rational(1), trials, seed, threads);
}

FsumOptimum max_fsum_oracle(std::size_t n, const Rational& grid_step) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "max_fsum_oracle needs n >= 2");
  if (grid_step.sign() <= 0 || grid_step > Rational(1)) {
    throw Error(ErrorCode::InvalidArgument, "grid step must lie in (0,1]");
  }
  const Rational steps_q = Rational(1) / grid_step;
  if (!steps_q.is_integer()) {
    throw Error(ErrorCode::InvalidArgument, "1/grid_step must be an integer");
  }
  const long steps = steps_q.numerator().get_si();
  std::vector<Rational> f_table;
  f_table.reserve(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k <= steps; ++k) f_table.push_back(f_ratio(Rational(k) * grid_step));

  FsumOptimum best;
  bool have = false;
  std::vector<long> parts(n, 0), best_parts;

  // Compositions of `steps` into n non-negative parts.
  auto recurse = [&](auto&& self, std::size_t pos, long remaining, const Rational& partial) -> void {
    if (pos + 1 == n) {
      parts[pos] = remaining;
      Rational value = partial + f_table[static_cast<std::size_t>(remaining)];
      if (!have || value > best.value) {
        best.value = std::move(value);
        best_parts = parts;
        have = true;
      }
      return;
    }
    for (long k = remaining; k >= 0; --k) {
      parts[pos] = k;
      self(self, pos + 1, remaining - k, partial + f_table[static_cast<std::size_t>(k)]);
    }
  };
  recurse(recurse, 0, steps, Rational());

  for (long k : best_parts) best.argmax.push_back(Rational(k) * grid_step);
  return best;
}

}  // namespace kocrs
