#include "kocrs/osgap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "json_io.hpp"
#include "kocrs/error.hpp"
#include "kocrs/trials.hpp"

namespace kocrs {

void OsgapInstance::validate() const {
  if (knapsacks == 0) throw Error(ErrorCode::ValidationError, "need at least one knapsack");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    const std::string where = "item " + std::to_string(i + 1);
    if (item.types.empty()) throw Error(ErrorCode::ValidationError, where + " has no types");
    Rational total;
    for (const auto& type : item.types) {
      if (type.prob.sign() < 0) {
        throw Error(ErrorCode::ValidationError, where + " has a negative type probability");
      }
      total += type.prob;
      if (type.values.size() != knapsacks || type.dists.size() != knapsacks) {
        throw Error(ErrorCode::ValidationError,
                    where + " needs one value and one distribution per knapsack");
      }
      for (const auto& v : type.values) {
        if (v.sign() < 0) throw Error(ErrorCode::ValidationError, where + " has a negative value");
      }
    }
    if (total != Rational(1)) {
      throw Error(ErrorCode::ValidationError,
                  where + " type probabilities sum to " + total.str());
    }
  }
}

bool OsgapInstance::type_independent_values() const {
  for (const auto& item : items) {
    for (const auto& type : item.types) {
      if (type.values != item.types.front().values) return false;
    }
  }
  return true;
}

std::size_t OsgapInstance::column_count() const {
  std::size_t cols = 0;
  for (const auto& item : items) cols += item.types.size() * knapsacks;
  return cols;
}

std::size_t OsgapInstance::column(std::size_t item, std::size_t type, std::size_t knapsack) const {
  std::size_t col = 0;
  for (std::size_t i = 0; i < item; ++i) col += items[i].types.size() * knapsacks;
  return col + type * knapsacks + knapsack;
}

OsgapLp build_lp(const OsgapInstance& instance) {
  instance.validate();
  OsgapLp out;
  const std::size_t cols = instance.column_count();
  const std::size_t m = instance.knapsacks;
  out.lp.objective.assign(cols, Rational());
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    for (std::size_t t = 0; t < instance.items[i].types.size(); ++t) {
      for (std::size_t j = 0; j < m; ++j) {
        out.columns.push_back({i, t, j});
        out.lp.objective[instance.column(i, t, j)] = instance.items[i].types[t].values[j];
      }
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Rational> row(cols);
    for (const auto& key : out.columns) {
      if (key.knapsack == j) {
        row[instance.column(key.item, key.type, j)] =
            instance.items[key.item].types[key.type].dists[j].mean();
      }
    }
    out.lp.add_row(std::move(row), RowSense::LessEqual, Rational(1));
  }
  out.knapsack_rows = m;
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    for (std::size_t t = 0; t < instance.items[i].types.size(); ++t) {
      std::vector<Rational> row(cols);
      for (std::size_t j = 0; j < m; ++j) row[instance.column(i, t, j)] = Rational(1);
      out.lp.add_row(std::move(row), RowSense::LessEqual, instance.items[i].types[t].prob);
      ++out.assignment_rows;
    }
  }
  return out;
}

LpSolution solve_osgap_lp(const OsgapInstance& instance) {
  const OsgapLp built = build_lp(instance);
  LpResult r = simplex_solve(built.lp);
  return LpSolution{r.status, std::move(r.x), std::move(r.objective)};
}

SizeDistribution knapsack_mixture(const OsgapInstance& instance, const LpSolution& solution,
                                  std::size_t item, std::size_t knapsack) {
  if (solution.status != LpStatus::Optimal) {
    throw Error(ErrorCode::InvalidArgument, "mixture needs an optimal LP solution");
  }
  const auto& types = instance.items.at(item).types;
  std::vector<WeightedPart> parts;
  Rational routed;
  for (std::size_t t = 0; t < types.size(); ++t) {
    const Rational& x = solution.x.at(instance.column(item, t, knapsack));
    routed += x;
    parts.push_back({x, types[t].dists[knapsack]});
  }
  return mixture(Rational(1) - routed, parts);
}

KocrsInstance knapsack_instance(const OsgapInstance& instance, const LpSolution& solution,
                                std::size_t knapsack, Setting setting) {
  std::vector<SizeDistribution> items;
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    items.push_back(knapsack_mixture(instance, solution, i, knapsack));
  }
  auto inst = KocrsInstance::make(setting, std::move(items));
  inst.name = "knapsack-" + std::to_string(knapsack + 1);
  return inst;
}

namespace {

std::vector<double> cumulative(const std::vector<Rational>& probs) {
  std::vector<double> cdf;
  Rational acc;
  for (const auto& p : probs) {
    acc += p;
    cdf.push_back(acc.to_double());
  }
  return cdf;
}

std::size_t pick(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return cdf.size() - 1;
  return static_cast<std::size_t>(it - cdf.begin());
}

void check_routing(const OsgapInstance& instance, const LpSolution& solution) {
  if (solution.status != LpStatus::Optimal) {
    throw Error(ErrorCode::InvalidArgument, "rounding needs an optimal LP solution");
  }
  for (std::size_t i = 0; i < instance.items.size(); ++i) {
    for (std::size_t t = 0; t < instance.items[i].types.size(); ++t) {
      Rational routed;
      for (std::size_t j = 0; j < instance.knapsacks; ++j) {
        const Rational& x = solution.x.at(instance.column(i, t, j));
        if (x.sign() < 0) throw Error(ErrorCode::RoutingError, "negative LP value");
        routed += x;
      }
      if (routed > instance.items[i].types[t].prob) {
        throw Error(ErrorCode::RoutingError,
                    "item " + std::to_string(i + 1) + " type " + std::to_string(t + 1) +
                        " routes more mass than its probability");
      }
    }
  }
}

// Sampling tables for one (item, type).
struct TypeTable {
  std::vector<double> route_cdf;                  // knapsacks, then "discard"
  std::vector<std::vector<double>> size_cdf;      // per knapsack
  std::vector<std::vector<std::size_t>> to_mix;   // per knapsack: F atom -> mixture atom
  std::vector<double> values;
};

}  // namespace

RoundingReport round_online(const OsgapInstance& instance, const LpSolution& solution,
                            const Rational& gamma, Policy policy, Setting setting,
                            std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  instance.validate();
  check_routing(instance, solution);
  const std::size_t n = instance.items.size();
  const std::size_t m = instance.knapsacks;

  std::vector<Schedule> schedules;
  std::vector<std::vector<SizeDistribution>> mixtures(m);
  for (std::size_t j = 0; j < m; ++j) {
    const KocrsInstance kinst = knapsack_instance(instance, solution, j, setting);
    schedules.push_back(compile_schedule(kinst, policy, gamma));
    if (!schedules.back().report.feasible) {
      throw Error(ErrorCode::Infeasible,
                  "policy infeasible on knapsack " + std::to_string(j + 1) + " at item " +
                      std::to_string(schedules.back().report.failure->item_index));
    }
    mixtures[j] = kinst.items;
  }

  auto mixture_index = [](const SizeDistribution& mix, const Rational& size) -> std::size_t {
    const auto atoms = mix.atoms();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (atoms[a].size == size) return a;
    }
    return atoms.size();
  };

  std::vector<std::vector<double>> type_cdf(n);
  std::vector<std::vector<TypeTable>> tables(n);
  std::vector<std::vector<std::size_t>> zero_index(n, std::vector<std::size_t>(m));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& types = instance.items[i].types;
    std::vector<Rational> tp;
    for (const auto& type : types) tp.push_back(type.prob);
    type_cdf[i] = cumulative(tp);
    type_cdf[i].back() = 1.0;
    for (std::size_t j = 0; j < m; ++j) zero_index[i][j] = mixture_index(mixtures[j][i], Rational());
    for (std::size_t t = 0; t < types.size(); ++t) {
      TypeTable table;
      std::vector<Rational> route;
      for (std::size_t j = 0; j < m; ++j) {
        const Rational& x = solution.x[instance.column(i, t, j)];
        route.push_back(types[t].prob.is_zero() ? Rational() : x / types[t].prob);
        std::vector<Rational> sp;
        std::vector<std::size_t> map;
        for (const auto& a : types[t].dists[j].atoms()) {
          sp.push_back(a.prob);
          map.push_back(mixture_index(mixtures[j][i], a.size));
        }
        auto cdf = cumulative(sp);
        cdf.back() = 1.0;
        table.size_cdf.push_back(std::move(cdf));
        table.to_mix.push_back(std::move(map));
        table.values.push_back(types[t].values[j].to_double());
      }
      Rational routed;
      for (const auto& r : route) routed += r;
      route.push_back(Rational(1) - routed);
      table.route_cdf = cumulative(route);
      table.route_cdf.back() = 1.0;
      tables[i].push_back(std::move(table));
    }
  }

  struct Acc {
    std::vector<std::uint64_t> assigned;
    std::vector<double> item_sum, item_sq;
    double total_sum = 0.0, total_sq = 0.0;
  };
  Acc init;
  init.assigned.assign(n, 0);
  init.item_sum.assign(n, 0.0);
  init.item_sq.assign(n, 0.0);

  const Acc acc = run_chunked(
      static_cast<std::size_t>(trials), init,
      [&](std::size_t first, std::size_t last, Acc& a) {
        std::vector<std::size_t> atom(m);
        std::vector<bool> closed(m);
        for (std::size_t tr = first; tr < last; ++tr) {
          TrialRng rng(seed, tr);
          for (std::size_t j = 0; j < m; ++j) {
            atom[j] = schedules[j].sample_initial(rng.uniform());
            closed[j] = false;
          }
          double trial_value = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const std::size_t t = pick(type_cdf[i], rng.uniform());
            const TypeTable& table = tables[i][t];
            const std::size_t target = pick(table.route_cdf, rng.uniform());
            double item_value = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
              const double u_attempt = rng.uniform();
              const double u_size = rng.uniform();
              if (closed[j]) continue;
              const ScheduleStep& step = schedules[j].steps[i];
              if (!(u_attempt < step.attempt[atom[j]])) {
                atom[j] = static_cast<std::size_t>(step.stay[atom[j]]);
                continue;
              }
              std::size_t size_atom;
              const bool real = j == target;
              if (real) {
                size_atom = table.to_mix[j][pick(table.size_cdf[j], u_size)];
              } else {
                size_atom = zero_index[i][j];
                if (size_atom >= step.size_count()) {
                  throw Error(ErrorCode::RoutingError, "zero realization outside the mixture support");
                }
              }
              const std::size_t cell = atom[j] * step.size_count() + size_atom;
              if (real && step.accepted[cell]) {
                ++a.assigned[i];
                item_value = table.values[j];
              }
              const std::int32_t d = step.dest[cell];
              if (d == ScheduleStep::kClosed) {
                closed[j] = true;
              } else {
                atom[j] = static_cast<std::size_t>(d);
              }
            }
            a.item_sum[i] += item_value;
            a.item_sq[i] += item_value * item_value;
            trial_value += item_value;
          }
          a.total_sum += trial_value;
          a.total_sq += trial_value * trial_value;
        }
      },
      [](Acc& total, const Acc& part) {
        for (std::size_t i = 0; i < total.assigned.size(); ++i) {
          total.assigned[i] += part.assigned[i];
          total.item_sum[i] += part.item_sum[i];
          total.item_sq[i] += part.item_sq[i];
        }
        total.total_sum += part.total_sum;
        total.total_sq += part.total_sq;
      },
      threads);

  RoundingReport report;
  report.mc.trials = trials;
  report.mc.seed = seed;
  report.lp_opt = solution.objective;
  report.gamma = gamma;
  for (std::size_t i = 0; i < n; ++i) {
    Rational target;
    for (std::size_t t = 0; t < instance.items[i].types.size(); ++t) {
      for (std::size_t j = 0; j < m; ++j) {
        target += instance.items[i].types[t].values[j] * solution.x[instance.column(i, t, j)];
      }
    }
    report.per_item_target.push_back(gamma * target);
  }
  if (trials == 0) return report;
  const double tr = static_cast<double>(trials);
  auto std_err = [tr](double sum, double sq) {
    const double mean = sum / tr;
    const double var = std::max(0.0, sq / tr - mean * mean);
    return tr > 1.0 ? std::sqrt(var / (tr - 1.0)) : 0.0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double p = static_cast<double>(acc.assigned[i]) / tr;
    report.mc.per_item_accept_freq.push_back(p);
    report.mc.std_err.push_back(std::sqrt(p * (1.0 - p) / tr));
    report.per_item_value_mean.push_back(acc.item_sum[i] / tr);
    report.per_item_value_std_err.push_back(std_err(acc.item_sum[i], acc.item_sq[i]));
  }
  report.mc.mean_total_value = acc.total_sum / tr;
  report.mc.value_std_err = std_err(acc.total_sum, acc.total_sq);
  return report;
}

namespace {

// One joint realization choice for an item: its type and its size on every knapsack.
template <class Scalar>
struct Outcome {
  Rational prob;
  double prob_d = 0.0;
  std::vector<Scalar> sizes;
  std::vector<Scalar> values;
};

template <class Scalar>
Scalar best_assignment(const std::vector<const Outcome<Scalar>*>& realized, std::size_t m,
                       const Scalar& one) {
  const std::size_t n = realized.size();
  std::vector<Scalar> best_value(n + 1);  // suffix bound: max value per item
  for (std::size_t i = n; i-- > 0;) {
    Scalar top{};
    for (const auto& v : realized[i]->values) top = std::max(top, v);
    best_value[i] = best_value[i + 1] + top;
  }
  std::vector<Scalar> load(m);
  Scalar best{};
  auto dfs = [&](auto&& self, std::size_t i, const Scalar& value) -> void {
    if (value > best) best = value;
    if (i == n || !(value + best_value[i] > best)) return;
    const auto& o = *realized[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (o.values[j] > Scalar{} && load[j] + o.sizes[j] <= one) {
        load[j] += o.sizes[j];
        self(self, i + 1, value + o.values[j]);
        load[j] -= o.sizes[j];
      }
    }
    self(self, i + 1, value);
  };
  dfs(dfs, 0, Scalar{});
  return best;
}

template <class Scalar>
LpBoundReport bound_check(const OsgapInstance& instance, const LpSolution& solution,
                          const Scalar& one, const std::function<Scalar(const Rational&)>& size_of,
                          const std::function<Scalar(const Rational&)>& value_of,
                          const std::function<Rational(const Scalar&)>& back,
                          std::uint64_t trials, std::uint64_t seed,
                          std::uint64_t enumeration_limit) {
  const std::size_t n = instance.items.size();
  const std::size_t m = instance.knapsacks;
  std::vector<std::vector<Outcome<Scalar>>> outcomes(n);
  long double count = 1.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& type : instance.items[i].types) {
      if (type.prob.is_zero()) continue;
      // Cartesian product of the per-knapsack size atoms.
      std::vector<std::size_t> idx(m, 0);
      for (;;) {
        Outcome<Scalar> o;
        o.prob = type.prob;
        for (std::size_t j = 0; j < m; ++j) {
          const auto& a = type.dists[j].atoms()[idx[j]];
          o.prob *= a.prob;
          o.sizes.push_back(size_of(a.size));
          o.values.push_back(value_of(type.values[j]));
        }
        o.prob_d = o.prob.to_double();
        outcomes[i].push_back(std::move(o));
        std::size_t j = 0;
        while (j < m && ++idx[j] == type.dists[j].support_size()) idx[j++] = 0;
        if (j == m) break;
      }
    }
    count *= static_cast<long double>(outcomes[i].size());
  }

  LpBoundReport report;
  report.lp_opt = solution.objective;
  std::vector<const Outcome<Scalar>*> realized(n);
  if (count <= static_cast<long double>(enumeration_limit)) {
    report.exact = true;
    report.realizations = static_cast<std::uint64_t>(count);
    Rational expectation;
    auto walk = [&](auto&& self, std::size_t i, const Rational& prob) -> void {
      if (i == n) {
        expectation += prob * back(best_assignment(realized, m, one));
        return;
      }
      for (const auto& o : outcomes[i]) {
        realized[i] = &o;
        self(self, i + 1, prob * o.prob);
      }
    };
    walk(walk, 0, Rational(1));
    report.exact_expectation = expectation;
    report.estimate = expectation.to_double();
    report.passed = report.lp_opt >= expectation;
    return report;
  }

  std::vector<std::vector<double>> cdfs(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const auto& o : outcomes[i]) cdfs[i].push_back(acc += o.prob_d);
    cdfs[i].back() = 1.0;
  }
  double sum = 0.0, sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    TrialRng rng(seed, t);
    for (std::size_t i = 0; i < n; ++i) realized[i] = &outcomes[i][pick(cdfs[i], rng.uniform())];
    const double v = back(best_assignment(realized, m, one)).to_double();
    sum += v;
    sq += v * v;
  }
  report.realizations = trials;
  if (trials > 0) {
    const double tr = static_cast<double>(trials);
    report.estimate = sum / tr;
    const double var = std::max(0.0, sq / tr - report.estimate * report.estimate);
    report.std_err = trials > 1 ? std::sqrt(var / (tr - 1.0)) : 0.0;
  }
  report.passed = report.lp_opt.to_double() >= report.estimate - 4.0 * report.std_err;
  return report;
}

}  // namespace

LpBoundReport lp_upper_bound_check(const OsgapInstance& instance, const LpSolution& solution,
                                   std::uint64_t trials, std::uint64_t seed,
                                   std::uint64_t enumeration_limit) {
  instance.validate();
  if (solution.status != LpStatus::Optimal) {
    throw Error(ErrorCode::InvalidArgument, "bound check needs an optimal LP solution");
  }
  const double assignments =
      std::pow(static_cast<double>(instance.knapsacks + 1), static_cast<double>(instance.items.size()));
  if (assignments > 1e7) {
    throw Error(ErrorCode::TooLargeToBruteForce,
                "(m+1)^n = " + std::to_string(assignments) + " assignments exceed 10^7");
  }

  std::vector<Rational> sizes, values;
  for (const auto& item : instance.items) {
    for (const auto& type : item.types) {
      for (const auto& v : type.values) values.push_back(v);
      for (const auto& d : type.dists) {
        for (const auto& a : d.atoms()) sizes.push_back(a.size);
      }
    }
  }
  const std::int64_t limit =
      std::numeric_limits<std::int64_t>::max() / static_cast<std::int64_t>(instance.items.size() + 2);
  const std::int64_t size_scale = common_denominator(sizes, limit);
  std::int64_t value_scale = common_denominator(values, limit);
  if (value_scale > 0) {
    Rational max_value;
    for (const auto& v : values) max_value = max(max_value, v);
    if (max_value * Rational(value_scale) > Rational(limit)) value_scale = 0;
  }

  if (size_scale > 0 && value_scale > 0) {
    const Rational ss(size_scale), vs(value_scale);
    return bound_check<std::int64_t>(
        instance, solution, size_scale,
        [&](const Rational& s) { return (s * ss).numerator().get_si(); },
        [&](const Rational& v) { return (v * vs).numerator().get_si(); },
        [&](const std::int64_t& v) { return Rational(v) / vs; }, trials, seed, enumeration_limit);
  }
  return bound_check<Rational>(
      instance, solution, Rational(1), [](const Rational& s) { return s; },
      [](const Rational& v) { return v; }, [](const Rational& v) { return v; }, trials, seed,
      enumeration_limit);
}

OsgapInstance random_osgap(const RandomOsgapSpec& spec) {
  if (spec.n == 0 || spec.knapsacks == 0 || spec.max_types == 0 || spec.max_atoms == 0 ||
      spec.grid < 2) {
    throw Error(ErrorCode::InvalidArgument, "random OSGAP spec has a zero dimension");
  }
  std::mt19937_64 engine(spec.seed);
  auto draw = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine); };
  const Rational grid(spec.grid);

  auto random_weights = [&](std::size_t k) {
    std::vector<long> w;
    long total = 0;
    for (std::size_t c = 0; c < k; ++c) {
      w.push_back(draw(1, spec.grid));
      total += w.back();
    }
    std::vector<Rational> p;
    for (long x : w) p.push_back(Rational(x, total));
    return p;
  };
  auto random_dist = [&] {
    const auto k = static_cast<std::size_t>(draw(1, static_cast<long>(spec.max_atoms)));
    std::vector<long> cells(static_cast<std::size_t>(spec.grid) + 1);
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = static_cast<long>(c);
    std::shuffle(cells.begin(), cells.end(), engine);
    const auto probs = random_weights(k);
    std::vector<Atom> atoms;
    for (std::size_t c = 0; c < k; ++c) atoms.push_back({Rational(cells[c]) / grid, probs[c]});
    return SizeDistribution::make(std::move(atoms));
  };

  OsgapInstance inst;
  inst.setting = spec.setting;
  inst.knapsacks = spec.knapsacks;
  inst.name = "random-osgap-" + std::to_string(spec.seed);
  for (std::size_t i = 0; i < spec.n; ++i) {
    OsgapItem item;
    const auto r = static_cast<std::size_t>(draw(1, static_cast<long>(spec.max_types)));
    const auto type_probs = random_weights(r);
    std::vector<Rational> shared_values;
    for (std::size_t j = 0; j < spec.knapsacks; ++j) {
      shared_values.push_back(Rational(draw(1, spec.grid)) / grid);
    }
    for (std::size_t t = 0; t < r; ++t) {
      ItemType type;
      type.prob = type_probs[t];
      for (std::size_t j = 0; j < spec.knapsacks; ++j) {
        type.values.push_back(spec.type_independent_values ? shared_values[j]
                                                           : Rational(draw(1, spec.grid)) / grid);
        type.dists.push_back(random_dist());
      }
      item.types.push_back(std::move(type));
    }
    inst.items.push_back(std::move(item));
  }
  inst.validate();
  return inst;
}

OsgapInstance parse_osgap(const std::string& text) {
  const nlohmann::json doc = json_io::parse_document(text);
  const json_io::Cursor root(doc, "");
  OsgapInstance inst;
  inst.setting = parse_setting(root.field("setting").string());
  inst.knapsacks = root.field("knapsacks").count();
  const auto items = root.field("items");
  for (std::size_t i = 0; i < items.size(); ++i) {
    OsgapItem item;
    const auto types = items.at(i).field("types");
    for (std::size_t t = 0; t < types.size(); ++t) {
      const auto entry = types.at(t);
      ItemType type;
      type.prob = entry.field("prob").rational();
      const auto values = entry.field("values");
      for (std::size_t j = 0; j < values.size(); ++j) type.values.push_back(values.at(j).rational());
      const auto dists = entry.field("dists");
      for (std::size_t j = 0; j < dists.size(); ++j) type.dists.push_back(json_io::read_atoms(dists.at(j)));
      item.types.push_back(std::move(type));
    }
    inst.items.push_back(std::move(item));
  }
  if (root.has("meta")) {
    std::map<std::string, std::string> params;
    json_io::read_meta(root.field("meta"), inst.name, params);
  }
  inst.validate();
  return inst;
}

OsgapInstance load_osgap(const std::filesystem::path& path) {
  return parse_osgap(json_io::read_file(path));
}

std::string serialize_osgap(const OsgapInstance& instance) {
  nlohmann::ordered_json doc;
  doc["setting"] = to_string(instance.setting);
  doc["knapsacks"] = instance.knapsacks;
  doc["items"] = nlohmann::ordered_json::array();
  for (const auto& item : instance.items) {
    nlohmann::ordered_json types = nlohmann::ordered_json::array();
    for (const auto& type : item.types) {
      nlohmann::ordered_json entry;
      entry["prob"] = type.prob.str();
      entry["values"] = nlohmann::ordered_json::array();
      for (const auto& v : type.values) entry["values"].push_back(v.str());
      entry["dists"] = nlohmann::ordered_json::array();
      for (const auto& d : type.dists) entry["dists"].push_back(json_io::write_atoms(d));
      types.push_back(std::move(entry));
    }
    nlohmann::ordered_json e;
    e["types"] = std::move(types);
    doc["items"].push_back(std::move(e));
  }
  if (!instance.name.empty()) doc["meta"] = json_io::write_meta(instance.name, {});
  return doc.dump(2) + "\n";
}

void save_osgap(const OsgapInstance& instance, const std::filesystem::path& path) {
  json_io::write_file(path, serialize_osgap(instance));
}

}  // namespace kocrs
