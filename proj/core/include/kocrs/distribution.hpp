#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "kocrs/rational.hpp"

namespace kocrs {

struct Atom {
  Rational size;
  Rational prob;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite discrete law of an item size on [0, 1].
///
/// Atoms are stored with strictly increasing sizes and probabilities that sum
/// to exactly one. Duplicate sizes given at construction are merged, so each
/// usage value is carried by a single atom.
class SizeDistribution {
 public:
  /// Merges duplicates, sorts and validates. Throws Error(OutOfRange) for a size
  /// outside [0, 1] or a non-positive probability, Error(SumNotOne) otherwise.
  static SizeDistribution make(std::vector<Atom> raw_atoms);

  static SizeDistribution point(const Rational& size);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  /// Pr[S <= x].
  Rational cdf(const Rational& x) const;
  Rational mean() const;
  /// Probability mass at exactly `size` (zero when not an atom).
  Rational prob_of(const Rational& size) const;
  /// Smallest atom size s with cdf(s) > u, for u in [0, 1).
  Rational sample(const Rational& u) const;

  friend bool operator==(const SizeDistribution&, const SizeDistribution&) = default;

 private:
  SizeDistribution() = default;
  std::vector<Atom> atoms_;
};

struct WeightedPart {
  Rational weight;
  SizeDistribution dist;
};

/// zero_weight * delta_0 + sum(weight * dist). Throws Error(WeightsNotOne)
/// unless the weights are non-negative and total exactly one.
SizeDistribution mixture(const Rational& zero_weight, std::span<const WeightedPart> parts);

enum class Setting { Hard, Soft };

const char* to_string(Setting setting);
Setting parse_setting(const std::string& text);

/// A KOCRS input: an ordered list of independent item size laws whose means
/// total at most one.
struct KocrsInstance {
  Setting setting = Setting::Hard;
  std::vector<SizeDistribution> items;
  std::string name;
  std::map<std::string, std::string> params;

  /// Throws Error(ValidationError) when the total mean exceeds one.
  static KocrsInstance make(Setting setting, std::vector<SizeDistribution> items);

  Rational total_mean() const;
  void validate() const;

  friend bool operator==(const KocrsInstance&, const KocrsInstance&) = default;
};

}  // namespace kocrs
