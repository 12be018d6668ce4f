#include "kocrs/instances.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kocrs/error.hpp"
#include "json_io.hpp"

namespace kocrs {

namespace {

void check_delta(const Rational& delta) {
  if (delta.sign() <= 0 || delta >= Rational(1, 2)) {
    throw Error(ErrorCode::DeltaOutOfRange, "delta must lie in (0, 1/2), got " + delta.str());
  }
}

SizeDistribution two_point(const Rational& a, const Rational& pa, const Rational& b,
                           const Rational& pb) {
  std::vector<Atom> atoms;
  if (pa.sign() > 0) atoms.push_back({a, pa});
  if (pb.sign() > 0) atoms.push_back({b, pb});
  return SizeDistribution::make(std::move(atoms));
}

}  // namespace

KocrsInstance example_greedy(Setting setting) {
  const Rational one(1), zero;
  const auto coin = two_point(one, Rational(1, 4), zero, Rational(3, 4));
  auto inst = KocrsInstance::make(setting, {SizeDistribution::point(Rational(1, 2)), coin, coin});
  inst.name = "example";
  return inst;
}

KocrsInstance thm31_instance(const Rational& delta) {
  check_delta(delta);
  const Rational one(1), half(1, 2);
  const Rational small = delta * delta;
  const auto middle = two_point(one, half - delta, small, half + delta);
  auto inst = KocrsInstance::make(
      Setting::Hard,
      {SizeDistribution::point(small), middle, middle, SizeDistribution::point(small)});
  inst.name = "thm31";
  inst.params["delta"] = delta.str();
  return inst;
}

KocrsInstance thm33_instance(const Rational& delta) {
  check_delta(delta);
  const Rational one(1), two(2);
  auto inst = KocrsInstance::make(
      Setting::Hard, {SizeDistribution::point(delta),
                      two_point(one, one - two * delta, Rational(), two * delta),
                      SizeDistribution::point(delta)});
  inst.name = "thm33";
  inst.params["delta"] = delta.str();
  return inst;
}

std::size_t thm41_item_count(const Rational& epsilon) {
  if (epsilon.sign() <= 0 || epsilon >= Rational(1, 2)) {
    throw Error(ErrorCode::DeltaOutOfRange, "epsilon must lie in (0, 1/2), got " + epsilon.str());
  }
  const Rational inv = Rational(1) / epsilon;
  mpz_class ceil_inv;
  mpz_cdiv_q(ceil_inv.get_mpz_t(), inv.raw().get_num_mpz_t(), inv.raw().get_den_mpz_t());
  return static_cast<std::size_t>(ceil_inv.get_ui()) + 2;
}

KocrsInstance thm41_instance(const Rational& epsilon, const Rational& delta) {
  const std::size_t n = thm41_item_count(epsilon);
  const Rational nq(static_cast<long>(n));
  if (delta.sign() <= 0) {
    throw Error(ErrorCode::DeltaOutOfRange, "delta must be positive, got " + delta.str());
  }
  if (delta >= epsilon / nq) {
    throw Error(ErrorCode::DeltaTooLarge,
                "delta must be below epsilon/n = " + (epsilon / nq).str() + ", got " + delta.str());
  }
  const Rational one(1);
  std::vector<SizeDistribution> items;
  items.push_back(two_point(delta, nq * delta, one, one - nq * delta));
  for (std::size_t i = 1; i < n; ++i) items.push_back(SizeDistribution::point(delta));
  auto inst = KocrsInstance::make(Setting::Soft, std::move(items));
  inst.name = "thm41";
  inst.params["epsilon"] = epsilon.str();
  inst.params["delta"] = delta.str();
  return inst;
}

KocrsInstance random_kocrs(const RandomKocrsSpec& spec) {
  if (spec.n == 0 || spec.max_atoms == 0 || spec.grid < 2) {
    throw Error(ErrorCode::InvalidArgument, "random instance needs n, max_atoms >= 1, grid >= 2");
  }
  std::mt19937_64 engine(spec.seed);
  const Rational one(1);
  const Rational grid(spec.grid);
  auto draw = [&](long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(engine);
  };

  KocrsInstance inst;
  inst.setting = spec.setting;
  inst.name = "random";
  inst.params["seed"] = std::to_string(spec.seed);
  inst.params["n"] = std::to_string(spec.n);

  if (spec.binary) {
    const Rational n1(static_cast<long>(spec.n + 1));
    const Rational eps = spec.epsilon.value_or(one / (Rational(2) * n1));
    if (eps.sign() <= 0 || !(n1 * eps < one)) {
      throw Error(ErrorCode::InvalidArgument, "binary mode needs 0 < epsilon and (n+1)*epsilon < 1");
    }
    std::vector<Rational> p(spec.n);
    Rational total;
    for (auto& pi : p) {
      pi = Rational(draw(0, spec.grid)) / grid;
      total += pi;
    }
    // sum p (1 - eps) + n eps <= 1
    const Rational nq(static_cast<long>(spec.n));
    const Rational cap = (one - nq * eps) / (one - eps);
    if (total > cap) {
      for (auto& pi : p) pi = pi * cap / total;
    }
    for (const auto& pi : p) inst.items.push_back(two_point(eps, one - pi, one, pi));
    inst.params["epsilon"] = eps.str();
    inst.validate();
    return inst;
  }

  std::vector<std::vector<Atom>> raw(spec.n);
  for (auto& atoms : raw) {
    const long k = draw(1, static_cast<long>(spec.max_atoms));
    std::vector<long> cells(static_cast<std::size_t>(spec.grid) + 1);
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = static_cast<long>(c);
    std::shuffle(cells.begin(), cells.end(), engine);
    cells.resize(static_cast<std::size_t>(std::min<long>(k, spec.grid + 1)));
    std::sort(cells.begin(), cells.end());
    std::vector<long> weights;
    long weight_total = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      weights.push_back(draw(1, spec.grid));
      weight_total += weights.back();
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      atoms.push_back({Rational(cells[c]) / grid, Rational(weights[c], weight_total)});
    }
  }
  auto total_mean = [&] {
    Rational m;
    for (const auto& atoms : raw) {
      for (const auto& a : atoms) m += a.size * a.prob;
    }
    return m;
  };

  if (total_mean() > one) {
    // Make room for a zero atom without exceeding max_atoms.
    for (auto& atoms : raw) {
      if (atoms.size() == spec.max_atoms && !atoms.front().size.is_zero()) {
        atoms.front().size = Rational();
      }
    }
    const Rational m = total_mean();
    if (m > one) {
      const Rational c = one / m;
      for (auto& atoms : raw) {
        Rational freed;
        for (auto& a : atoms) {
          if (a.size.is_zero()) continue;
          const Rational scaled = a.prob * c;
          freed += a.prob - scaled;
          a.prob = scaled;
        }
        if (atoms.front().size.is_zero()) {
          atoms.front().prob += freed;
        } else {
          atoms.insert(atoms.begin(), Atom{Rational(), freed});
        }
      }
    }
  }
  for (auto& atoms : raw) inst.items.push_back(SizeDistribution::make(std::move(atoms)));
  inst.validate();
  return inst;
}

KocrsInstance parse_instance(const std::string& text) {
  const nlohmann::json doc = json_io::parse_document(text);
  json_io::Cursor root(doc, "");
  KocrsInstance inst;
  inst.setting = parse_setting(root.field("setting").string());
  const auto items = root.field("items");
  for (std::size_t i = 0; i < items.size(); ++i) {
    inst.items.push_back(json_io::read_atoms(items.at(i).field("atoms")));
  }
  if (root.has("meta")) json_io::read_meta(root.field("meta"), inst.name, inst.params);
  inst.validate();
  return inst;
}

KocrsInstance load_instance(const std::filesystem::path& path) {
  return parse_instance(json_io::read_file(path));
}

std::string serialize_instance(const KocrsInstance& instance) {
  nlohmann::ordered_json doc;
  doc["setting"] = to_string(instance.setting);
  doc["items"] = nlohmann::ordered_json::array();
  for (const auto& item : instance.items) {
    nlohmann::ordered_json entry;
    entry["atoms"] = json_io::write_atoms(item);
    doc["items"].push_back(std::move(entry));
  }
  if (!instance.name.empty() || !instance.params.empty()) {
    doc["meta"] = json_io::write_meta(instance.name, instance.params);
  }
  return doc.dump(2) + "\n";
}

void save_instance(const KocrsInstance& instance, const std::filesystem::path& path) {
  json_io::write_file(path, serialize_instance(instance));
}

KocrsInstance make_fixture(const std::string& name, const std::optional<Rational>& delta,
                           const std::optional<Rational>& epsilon) {
  if (name == "example" || name == "example_greedy") return example_greedy();
  if (name == "thm31") return thm31_instance(delta.value_or(Rational(1, 100)));
  if (name == "thm33") return thm33_instance(delta.value_or(Rational(1, 1000)));
  if (name == "thm41") {
    return thm41_instance(epsilon.value_or(Rational(1, 10)), delta.value_or(Rational(1, 200)));
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown fixture '" + name + "' (expected example, thm31, thm33, thm41)");
}

}  // namespace kocrs
