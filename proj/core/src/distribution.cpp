#include "kocrs/distribution.hpp"

#include <algorithm>

#include "kocrs/error.hpp"

namespace kocrs {

SizeDistribution SizeDistribution::make(std::vector<Atom> raw_atoms) {
  if (raw_atoms.empty()) throw Error(ErrorCode::SumNotOne, "distribution has no atoms");
  const Rational zero;
  const Rational one(1);
  for (const auto& a : raw_atoms) {
    if (a.size < zero || a.size > one) {
      throw Error(ErrorCode::OutOfRange, "atom size " + a.size.str() + " outside [0,1]");
    }
    if (a.prob.sign() <= 0 || a.prob > one) {
      throw Error(ErrorCode::OutOfRange, "atom probability " + a.prob.str() + " outside (0,1]");
    }
  }
  std::sort(raw_atoms.begin(), raw_atoms.end(),
            [](const Atom& x, const Atom& y) { return x.size < y.size; });
  SizeDistribution d;
  Rational total;
  for (auto& a : raw_atoms) {
    total += a.prob;
    if (!d.atoms_.empty() && d.atoms_.back().size == a.size) {
      d.atoms_.back().prob += a.prob;
    } else {
      d.atoms_.push_back(std::move(a));
    }
  }
  if (total != one) {
    throw Error(ErrorCode::SumNotOne, "atom probabilities sum to " + total.str());
  }
  return d;
}

SizeDistribution SizeDistribution::point(const Rational& size) {
  return make({Atom{size, Rational(1)}});
}

Rational SizeDistribution::cdf(const Rational& x) const {
  Rational acc;
  for (const auto& a : atoms_) {
    if (a.size > x) break;
    acc += a.prob;
  }
  return acc;
}

Rational SizeDistribution::mean() const {
  Rational acc;
  for (const auto& a : atoms_) acc += a.size * a.prob;
  return acc;
}

Rational SizeDistribution::prob_of(const Rational& size) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), size,
                             [](const Atom& a, const Rational& s) { return a.size < s; });
  return (it != atoms_.end() && it->size == size) ? it->prob : Rational();
}

Rational SizeDistribution::sample(const Rational& u) const {
  Rational acc;
  for (const auto& a : atoms_) {
    acc += a.prob;
    if (acc > u) return a.size;
  }
  return atoms_.back().size;
}

SizeDistribution mixture(const Rational& zero_weight, std::span<const WeightedPart> parts) {
  Rational total = zero_weight;
  if (zero_weight.sign() < 0) throw Error(ErrorCode::WeightsNotOne, "negative zero weight");
  std::vector<Atom> atoms;
  if (zero_weight.sign() > 0) atoms.push_back({Rational(), zero_weight});
  for (const auto& part : parts) {
    if (part.weight.sign() < 0) throw Error(ErrorCode::WeightsNotOne, "negative weight");
    total += part.weight;
    if (part.weight.is_zero()) continue;
    for (const auto& a : part.dist.atoms()) atoms.push_back({a.size, a.prob * part.weight});
  }
  if (total != Rational(1)) {
    throw Error(ErrorCode::WeightsNotOne, "mixture weights sum to " + total.str());
  }
  return SizeDistribution::make(std::move(atoms));
}

const char* to_string(Setting setting) { return setting == Setting::Hard ? "hard" : "soft"; }

Setting parse_setting(const std::string& text) {
  if (text == "hard") return Setting::Hard;
  if (text == "soft") return Setting::Soft;
  throw Error(ErrorCode::ParseError, "setting must be 'hard' or 'soft', got '" + text + "'");
}

KocrsInstance KocrsInstance::make(Setting setting, std::vector<SizeDistribution> items) {
  KocrsInstance inst;
  inst.setting = setting;
  inst.items = std::move(items);
  inst.validate();
  return inst;
}

Rational KocrsInstance::total_mean() const {
  Rational acc;
  for (const auto& d : items) acc += d.mean();
  return acc;
}

void KocrsInstance::validate() const {
  const Rational total = total_mean();
  if (total > Rational(1)) {
    throw Error(ErrorCode::ValidationError, "total expected size " + total.str() + " exceeds 1");
  }
}

}  // namespace kocrs
