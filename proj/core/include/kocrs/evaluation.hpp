#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kocrs/distribution.hpp"
#include "kocrs/policy.hpp"
#include "kocrs/rational.hpp"

namespace kocrs {

enum class Policy { Greedy, Aggressive, Reserved };

const char* to_string(Policy policy);
Policy parse_policy(const std::string& text);

/// Exact evaluation aborts past this many alive usage atoms.
inline constexpr std::size_t kMaxAliveAtoms = 1'000'000;

struct EvalReport {
  std::vector<Rational> per_item_accept;
  bool feasible = true;
  std::optional<FeasibilityFailure> failure;
  Rational final_closed_mass;
};

/// Exact states before every processed item (states[i] precedes item i+1, the
/// last entry follows the last processed item) and the rules applied.
struct ExactTrace {
  EvalReport report;
  std::vector<KnapsackState> states;
  std::vector<AttemptRule> rules;
};

/// Virtual-item size used by the reserved policy on `instance`: the common
/// non-unit atom size, or 1/(n+2) when every atom has size 1. Throws
/// Error(PolicyPrecondition) unless the instance is hard, every atom size is
/// in {epsilon, 1} and (n+1)*epsilon < 1.
Rational reserved_epsilon(const KocrsInstance& instance);

ExactTrace trace_exact(const KocrsInstance& instance, Policy policy, const Rational& gamma);

/// Folds the exact one-item transition over the instance, building each rule
/// from the exact state. Stops at the first FeasibilityFailure.
EvalReport evaluate_exact(const KocrsInstance& instance, Policy policy, const Rational& gamma);

/// Per-item lookup tables for sampling paths under rules fixed by the exact
/// evaluation. Atom indices follow the ascending usage order of the exact state.
struct ScheduleStep {
  static constexpr std::int32_t kClosed = -1;

  std::size_t atom_count = 0;
  std::vector<Rational> usages;
  std::vector<double> attempt;        // per alive atom
  std::vector<double> size_cdf;       // cumulative probability per size atom
  std::vector<std::int32_t> dest;     // [atom * sizes + size] -> next atom or kClosed
  std::vector<std::uint8_t> accepted; // [atom * sizes + size]
  std::vector<std::int32_t> stay;     // next index of the same usage, or kClosed

  std::size_t size_count() const { return size_cdf.size(); }
  std::size_t sample_size(double u) const;
};

struct Schedule {
  EvalReport report;
  std::vector<double> initial_cdf;
  std::vector<ScheduleStep> steps;

  std::size_t sample_initial(double u) const;
};

Schedule compile_schedule(const KocrsInstance& instance, Policy policy, const Rational& gamma);

struct McReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> per_item_accept_freq;
  std::vector<double> std_err;
  double mean_total_value = 0.0;
  double value_std_err = 0.0;

  friend bool operator==(const McReport&, const McReport&) = default;
};

/// Samples `trials` independent paths under the exact-evaluation rules.
/// Throws Error(Infeasible) when the policy is infeasible on the instance.
McReport simulate(const KocrsInstance& instance, Policy policy, const Rational& gamma,
                  std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

struct GammaGridPoint {
  Rational gamma;
  bool feasible = false;
};

struct GammaSearch {
  Rational max_gamma;
  std::vector<GammaGridPoint> grid;
  /// False when some infeasible grid point lies below a feasible one.
  bool monotone = true;
};

/// Grid scan over (0, 1] followed by bisection above the largest feasible grid
/// point. The grid is authoritative; monotonicity in gamma is not assumed.
GammaSearch max_feasible_gamma(const KocrsInstance& instance, Policy policy,
                               const Rational& grid_step, const Rational& refine_tol);

struct RenewalEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
};

/// Monte Carlo over the path-renewal procedure: draw two independent size
/// vectors X and X', count one path, and open a fresh path (seeded with the
/// replacement draw X'_k) every time the running sum overflows.
RenewalEstimate estimate_renewal_T(const KocrsInstance& instance, std::uint64_t trials,
                                   std::uint64_t seed, unsigned threads = 0);

struct FsumOptimum {
  Rational value;
  std::vector<Rational> argmax;
};

/// Brute-force max of sum f_ratio(p_i) over the grid simplex {p >= 0, sum p = 1}.
FsumOptimum max_fsum_oracle(std::size_t n, const Rational& grid_step);

}  // namespace kocrs
