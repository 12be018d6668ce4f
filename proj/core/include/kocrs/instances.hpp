#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "kocrs/distribution.hpp"
#include "kocrs/rational.hpp"

namespace kocrs {

// Parametric witness instances.

/// Three items: 1/2 surely, then two copies of {1 w.p. 1/4, 0 w.p. 3/4}.
KocrsInstance example_greedy(Setting setting = Setting::Hard);

/// Four hard items: delta^2; twice {1 w.p. 1/2 - delta, delta^2 w.p. 1/2 + delta}; delta^2.
/// Requires 0 < delta < 1/2, else Error(DeltaOutOfRange).
KocrsInstance thm31_instance(const Rational& delta);

/// Three hard items: delta; {1 w.p. 1 - 2 delta, 0 w.p. 2 delta}; delta.
KocrsInstance thm33_instance(const Rational& delta);

/// Soft instance with n = 2 + ceil(1/epsilon) items: {1 w.p. 1 - n delta,
/// delta w.p. n delta}, then n - 1 items of size delta. Requires
/// 0 < epsilon < 1/2 and 0 < delta < epsilon / n (Error(DeltaTooLarge)).
KocrsInstance thm41_instance(const Rational& epsilon, const Rational& delta);

/// Item count of thm41_instance for a given epsilon.
std::size_t thm41_item_count(const Rational& epsilon);

struct RandomKocrsSpec {
  std::size_t n = 4;
  std::size_t max_atoms = 3;
  Setting setting = Setting::Hard;
  std::uint64_t seed = 0;
  /// Emit only sizes {epsilon, 1}.
  bool binary = false;
  /// Binary-mode epsilon; defaults to 1/(2(n+1)). Must satisfy (n+1)*epsilon < 1.
  std::optional<Rational> epsilon;
  /// Grid denominator for sizes and probabilities.
  long grid = 20;
};

/// Random instance on a rational grid whose means total at most 1 exactly.
/// When the raw draw overshoots, non-zero atoms are scaled down and the freed
/// mass moves to a size-0 atom so the total becomes exactly 1.
KocrsInstance random_kocrs(const RandomKocrsSpec& spec);

/// Throws Error(ParseError) with line/field context, Error(ValidationError)
/// for invalid atoms or a total mean above 1.
KocrsInstance load_instance(const std::filesystem::path& path);
KocrsInstance parse_instance(const std::string& text);
void save_instance(const KocrsInstance& instance, const std::filesystem::path& path);
std::string serialize_instance(const KocrsInstance& instance);

KocrsInstance make_fixture(const std::string& name, const std::optional<Rational>& delta,
                           const std::optional<Rational>& epsilon);

}  // namespace kocrs
