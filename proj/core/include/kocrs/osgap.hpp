#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kocrs/distribution.hpp"
#include "kocrs/evaluation.hpp"
#include "kocrs/lp.hpp"
#include "kocrs/rational.hpp"

namespace kocrs {

struct ItemType {
  Rational prob;
  std::vector<Rational> values;          // one per knapsack
  std::vector<SizeDistribution> dists;   // one per knapsack

  friend bool operator==(const ItemType&, const ItemType&) = default;
};

struct OsgapItem {
  std::vector<ItemType> types;

  friend bool operator==(const OsgapItem&, const OsgapItem&) = default;
};

/// Online stochastic generalized assignment instance: typed items routed to
/// `knapsacks` unit-capacity knapsacks.
struct OsgapInstance {
  Setting setting = Setting::Soft;
  std::size_t knapsacks = 1;
  std::vector<OsgapItem> items;
  std::string name;

  /// Type probabilities sum to 1 per item, values are non-negative and every
  /// type has one value and one distribution per knapsack.
  void validate() const;
  bool type_independent_values() const;
  std::size_t column_count() const;
  /// Column of (item, type, knapsack); columns run item-major, then type, then knapsack.
  std::size_t column(std::size_t item, std::size_t type, std::size_t knapsack) const;

  friend bool operator==(const OsgapInstance&, const OsgapInstance&) = default;
};

struct ColumnKey {
  std::size_t item = 0;
  std::size_t type = 0;
  std::size_t knapsack = 0;
};

/// Expected-instance relaxation: max sum v x, one row per knapsack
/// (sum of mean sizes times x <= 1) followed by one row per (item, type)
/// (sum over knapsacks of x <= type probability).
struct OsgapLp {
  LinearProgram lp;
  std::vector<ColumnKey> columns;
  std::size_t knapsack_rows = 0;
  std::size_t assignment_rows = 0;
};

OsgapLp build_lp(const OsgapInstance& instance);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> x;  // indexed by OsgapInstance::column
  Rational objective;
};

LpSolution solve_osgap_lp(const OsgapInstance& instance);

/// Law of item i as seen by knapsack j under the LP routing: mass
/// 1 - sum_t x_itj at zero plus sum_t x_itj * F_itj.
SizeDistribution knapsack_mixture(const OsgapInstance& instance, const LpSolution& solution,
                                  std::size_t item, std::size_t knapsack);

/// The per-knapsack KOCRS input built from the mixtures of every item.
KocrsInstance knapsack_instance(const OsgapInstance& instance, const LpSolution& solution,
                                std::size_t knapsack, Setting setting);

struct RoundingReport {
  McReport mc;  // per_item_accept_freq = Pr[item assigned]
  std::vector<double> per_item_value_mean;
  std::vector<double> per_item_value_std_err;
  Rational lp_opt;
  Rational gamma;
  /// gamma * sum_t sum_j v_itj x_itj for each item.
  std::vector<Rational> per_item_target;
};

/// Online rounding: each arriving item draws its type, is routed to knapsack
/// j* with probability x_itj / p_it, and is assigned when j*'s KOCRS attempts
/// it and the realized size is accepted. Other knapsacks, and every knapsack
/// when the item is discarded, observe a size-0 realization.
RoundingReport round_online(const OsgapInstance& instance, const LpSolution& solution,
                            const Rational& gamma, Policy policy, Setting setting,
                            std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

struct LpBoundReport {
  Rational lp_opt;
  /// E[offline ILP optimum]; exact when `exact`, else a sample mean.
  Rational exact_expectation;
  double estimate = 0.0;
  double std_err = 0.0;
  bool exact = false;
  std::uint64_t realizations = 0;
  bool passed = false;
};

/// Checks that the LP optimum bounds the expected offline optimum. Realizations
/// (types and per-knapsack sizes) are enumerated when there are at most
/// `enumeration_limit` of them, otherwise `trials` are sampled. Each realized
/// assignment problem is solved by exhaustive search; throws
/// Error(TooLargeToBruteForce) when (m+1)^n exceeds 10^7.
LpBoundReport lp_upper_bound_check(const OsgapInstance& instance, const LpSolution& solution,
                                   std::uint64_t trials, std::uint64_t seed,
                                   std::uint64_t enumeration_limit = 100'000);

struct RandomOsgapSpec {
  std::size_t n = 3;
  std::size_t knapsacks = 2;
  std::size_t max_types = 2;
  std::size_t max_atoms = 2;
  Setting setting = Setting::Soft;
  bool type_independent_values = false;
  std::uint64_t seed = 0;
  long grid = 10;
};

OsgapInstance random_osgap(const RandomOsgapSpec& spec);

OsgapInstance parse_osgap(const std::string& text);
OsgapInstance load_osgap(const std::filesystem::path& path);
std::string serialize_osgap(const OsgapInstance& instance);
void save_osgap(const OsgapInstance& instance, const std::filesystem::path& path);

}  // namespace kocrs
