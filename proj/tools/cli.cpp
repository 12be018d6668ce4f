#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kocrs/error.hpp"
#include "kocrs/evaluation.hpp"
#include "kocrs/instances.hpp"
#include "kocrs/osgap.hpp"

namespace kocrs::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Options {
  std::string instance_path;
  std::string fixture;
  std::string delta, epsilon;
  std::string setting;
  std::string policy = "aggressive";
  std::string gamma = "1/3";
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "csv";
  std::string output;
  // sweep
  std::string grid_step = "1/100";
  std::string refine_tol = "1/10000";
  // gen / osgap
  bool random = false;
  bool binary = false;
  bool osgap = false;
  bool bound = false;
  bool type_independent = false;
  std::size_t n = 4;
  std::size_t m = 2;
  std::size_t max_atoms = 0;
  std::size_t max_types = 2;
  std::uint64_t instance_seed = 0;
  std::uint64_t bound_trials = 20000;
};

std::optional<Rational> optional_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return Rational::parse(text);
}

std::string decimal(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

KocrsInstance load_source(const Options& o) {
  if (o.instance_path.empty() == o.fixture.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --instance or --fixture");
  }
  KocrsInstance inst = o.instance_path.empty()
                           ? make_fixture(o.fixture, optional_rational(o.delta), optional_rational(o.epsilon))
                           : load_instance(o.instance_path);
  if (!o.setting.empty()) inst.setting = parse_setting(o.setting);
  return inst;
}

OsgapInstance load_osgap_source(const Options& o) {
  if (o.random == !o.instance_path.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --instance or --random");
  }
  if (!o.instance_path.empty()) return load_osgap(o.instance_path);
  RandomOsgapSpec spec;
  spec.n = o.n;
  spec.knapsacks = o.m;
  spec.max_types = o.max_types;
  spec.max_atoms = o.max_atoms == 0 ? 2 : o.max_atoms;
  spec.seed = o.instance_seed;
  spec.type_independent_values = o.type_independent;
  if (!o.setting.empty()) spec.setting = parse_setting(o.setting);
  return random_osgap(spec);
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + o.output + "'");
  file << text;
}

void check_format(const Options& o) {
  if (o.format != "csv" && o.format != "json") {
    throw Error(ErrorCode::InvalidArgument, "--format must be csv or json");
  }
}

int cmd_eval(const Options& o, std::ostream& out) {
  check_format(o);
  const KocrsInstance inst = load_source(o);
  const Policy policy = parse_policy(o.policy);
  const Rational gamma = Rational::parse(o.gamma);
  const EvalReport report = evaluate_exact(inst, policy, gamma);

  std::ostringstream os;
  if (o.format == "csv") {
    os << "item,accept_prob,status\n";
    for (std::size_t i = 0; i < report.per_item_accept.size(); ++i) {
      os << i + 1 << ',' << report.per_item_accept[i].str() << ",ok\n";
    }
    if (report.failure) {
      os << report.failure->item_index << ',' << report.failure->max_achievable.str()
         << ",infeasible\n";
    }
  } else {
    ordered_json j;
    j["instance"] = inst.name;
    j["setting"] = to_string(inst.setting);
    j["policy"] = to_string(policy);
    j["gamma"] = gamma.str();
    j["feasible"] = report.feasible;
    j["per_item_accept"] = ordered_json::array();
    for (const auto& a : report.per_item_accept) j["per_item_accept"].push_back(a.str());
    if (report.failure) {
      j["failure"] = {{"item", report.failure->item_index},
                      {"max_achievable", report.failure->max_achievable.str()}};
    }
    os << j.dump(2) << '\n';
  }
  emit(o, os.str(), out);
  return report.feasible ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  check_format(o);
  const KocrsInstance inst = load_source(o);
  const Policy policy = parse_policy(o.policy);
  const Rational gamma = Rational::parse(o.gamma);
  const McReport mc = simulate(inst, policy, gamma, o.trials, o.seed, o.threads);

  std::ostringstream os;
  if (o.format == "csv") {
    os << "item,trials,seed,accept_freq,std_err\n";
    for (std::size_t i = 0; i < mc.per_item_accept_freq.size(); ++i) {
      os << i + 1 << ',' << mc.trials << ',' << mc.seed << ',' << decimal(mc.per_item_accept_freq[i])
         << ',' << decimal(mc.std_err[i]) << '\n';
    }
  } else {
    ordered_json j;
    j["instance"] = inst.name;
    j["policy"] = to_string(policy);
    j["gamma"] = gamma.str();
    j["trials"] = mc.trials;
    j["seed"] = mc.seed;
    j["accept_freq"] = mc.per_item_accept_freq;
    j["std_err"] = mc.std_err;
    os << j.dump(2) << '\n';
  }
  emit(o, os.str(), out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  check_format(o);
  const KocrsInstance inst = load_source(o);
  const Policy policy = parse_policy(o.policy);
  const GammaSearch search =
      max_feasible_gamma(inst, policy, Rational::parse(o.grid_step), Rational::parse(o.refine_tol));

  std::ostringstream os;
  if (o.format == "csv") {
    os << "gamma,feasible\n";
    for (const auto& p : search.grid) os << p.gamma.str() << ',' << (p.feasible ? 1 : 0) << '\n';
    os << "\nrefined_max_gamma,refined_max_decimal,monotone\n";
    os << search.max_gamma.str() << ',' << decimal(search.max_gamma.to_double()) << ','
       << (search.monotone ? 1 : 0) << '\n';
  } else {
    ordered_json j;
    j["instance"] = inst.name;
    j["policy"] = to_string(policy);
    j["grid"] = ordered_json::array();
    for (const auto& p : search.grid) {
      j["grid"].push_back({{"gamma", p.gamma.str()}, {"feasible", p.feasible}});
    }
    j["refined_max_gamma"] = search.max_gamma.str();
    j["refined_max_decimal"] = search.max_gamma.to_double();
    j["monotone"] = search.monotone;
    os << j.dump(2) << '\n';
  }
  emit(o, os.str(), out);
  return kExitOk;
}

int cmd_osgap(const Options& o, std::ostream& out) {
  check_format(o);
  const OsgapInstance inst = load_osgap_source(o);
  const LpSolution sol = solve_osgap_lp(inst);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::ValidationError, std::string("LP is ") + to_string(sol.status));
  }
  const Policy policy = parse_policy(o.policy);
  const Rational gamma = Rational::parse(o.gamma);
  const Setting setting = o.setting.empty() ? inst.setting : parse_setting(o.setting);
  const RoundingReport rr = round_online(inst, sol, gamma, policy, setting, o.trials, o.seed, o.threads);
  std::optional<LpBoundReport> bound;
  if (o.bound) bound = lp_upper_bound_check(inst, sol, o.bound_trials, o.seed);

  std::ostringstream os;
  if (o.format == "csv") {
    os << "item,type,knapsack,x_star\n";
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      for (std::size_t t = 0; t < inst.items[i].types.size(); ++t) {
        for (std::size_t j = 0; j < inst.knapsacks; ++j) {
          os << i + 1 << ',' << t + 1 << ',' << j + 1 << ',' << sol.x[inst.column(i, t, j)].str()
             << '\n';
        }
      }
    }
    os << "\ntrial_count,seed,mean_value,std_err,lp_opt,gamma\n";
    os << rr.mc.trials << ',' << rr.mc.seed << ',' << decimal(rr.mc.mean_total_value) << ','
       << decimal(rr.mc.value_std_err) << ',' << rr.lp_opt.str() << ',' << gamma.str() << '\n';
    if (bound) {
      os << "\nlp_opt,offline_estimate,std_err,exact,passed\n";
      os << bound->lp_opt.str() << ','
         << (bound->exact ? bound->exact_expectation.str() : decimal(bound->estimate)) << ','
         << decimal(bound->std_err) << ',' << (bound->exact ? 1 : 0) << ','
         << (bound->passed ? 1 : 0) << '\n';
    }
  } else {
    ordered_json j;
    j["lp_opt"] = sol.objective.str();
    j["x_star"] = ordered_json::array();
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
      for (std::size_t t = 0; t < inst.items[i].types.size(); ++t) {
        for (std::size_t k = 0; k < inst.knapsacks; ++k) {
          j["x_star"].push_back({{"item", i + 1},
                                 {"type", t + 1},
                                 {"knapsack", k + 1},
                                 {"value", sol.x[inst.column(i, t, k)].str()}});
        }
      }
    }
    j["rounding"] = {{"trial_count", rr.mc.trials},
                     {"seed", rr.mc.seed},
                     {"mean_value", rr.mc.mean_total_value},
                     {"std_err", rr.mc.value_std_err},
                     {"gamma", gamma.str()},
                     {"per_item_value", rr.per_item_value_mean}};
    if (bound) {
      j["bound"] = {{"exact", bound->exact},
                    {"estimate", bound->estimate},
                    {"std_err", bound->std_err},
                    {"passed", bound->passed}};
      if (bound->exact) j["bound"]["exact_expectation"] = bound->exact_expectation.str();
    }
    os << j.dump(2) << '\n';
  }
  emit(o, os.str(), out);
  return kExitOk;
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.osgap) {
    Options copy = o;
    copy.random = true;
    emit(o, serialize_osgap(load_osgap_source(copy)), out);
    return kExitOk;
  }
  if (o.random == !o.fixture.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --random or --fixture");
  }
  KocrsInstance inst;
  if (o.random) {
    RandomKocrsSpec spec;
    spec.n = o.n;
    spec.max_atoms = o.max_atoms == 0 ? 3 : o.max_atoms;
    spec.setting = o.setting.empty() ? Setting::Soft : parse_setting(o.setting);
    spec.seed = o.seed;
    spec.binary = o.binary;
    spec.epsilon = optional_rational(o.epsilon);
    inst = random_kocrs(spec);
  } else {
    inst = make_fixture(o.fixture, optional_rational(o.delta), optional_rational(o.epsilon));
    if (!o.setting.empty()) inst.setting = parse_setting(o.setting);
  }
  emit(o, serialize_instance(inst), out);
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Infeasible: return kExitInfeasible;
    case ErrorCode::AtomExplosion:
    case ErrorCode::TooLargeToBruteForce: return kExitResource;
    default: return kExitInput;
  }
}

void add_source(CLI::App* cmd, Options& o) {
  auto* inst = cmd->add_option("--instance", o.instance_path, "Instance file (JSON)");
  auto* fix = cmd->add_option("--fixture", o.fixture, "Built-in instance: example, thm31, thm33, thm41");
  inst->excludes(fix);
  cmd->add_option("--delta", o.delta, "Fixture parameter delta (rational)");
  cmd->add_option("--epsilon", o.epsilon, "Fixture parameter epsilon (rational)");
  cmd->add_option("--setting", o.setting, "Override the constraint setting: hard or soft");
}

void add_policy(CLI::App* cmd, Options& o) {
  cmd->add_option("--policy", o.policy, "greedy, aggressive or reserved")->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "Target acceptance probability (rational)")->capture_default_str();
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "csv or json")->capture_default_str();
  cmd->add_option("-o,--output", o.output, "Write the report to this path");
}

void add_trials(CLI::App* cmd, Options& o) {
  cmd->add_option("--trials", o.trials, "Monte Carlo trials")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact evaluation and simulation of knapsack contention resolution schemes", "kocrs"};
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Exact per-item acceptance probabilities");
  add_source(eval, o);
  add_policy(eval, o);
  add_common(eval, o);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo acceptance frequencies");
  add_source(sim, o);
  add_policy(sim, o);
  add_common(sim, o);
  add_trials(sim, o);

  auto* sweep = app.add_subcommand("sweep", "Grid scan and refinement of the largest feasible gamma");
  add_source(sweep, o);
  sweep->add_option("--policy", o.policy, "greedy, aggressive or reserved")->capture_default_str();
  sweep->add_option("--grid-step", o.grid_step, "Grid spacing over (0, 1]")->capture_default_str();
  sweep->add_option("--refine-tol", o.refine_tol, "Bisection tolerance")->capture_default_str();
  add_common(sweep, o);

  auto* osg = app.add_subcommand("osgap", "Solve the assignment LP and run the online rounding");
  osg->add_option("--instance", o.instance_path, "OSGAP instance file (JSON)");
  osg->add_flag("--random", o.random, "Generate a random OSGAP instance");
  osg->add_option("--n", o.n, "Random: item count");
  osg->add_option("--m", o.m, "Random: knapsack count");
  osg->add_option("--max-types", o.max_types, "Random: types per item");
  osg->add_option("--max-atoms", o.max_atoms, "Random: atoms per size law");
  osg->add_option("--instance-seed", o.instance_seed, "Random: generator seed");
  osg->add_flag("--type-independent", o.type_independent, "Random: values do not depend on the type");
  osg->add_option("--setting", o.setting, "Constraint setting for the per-knapsack schemes");
  osg->add_flag("--bound", o.bound, "Also check the LP bound against the offline optimum");
  osg->add_option("--bound-trials", o.bound_trials, "Samples for the bound check when enumeration is too large");
  add_policy(osg, o);
  add_common(osg, o);
  add_trials(osg, o);

  auto* gen = app.add_subcommand("gen", "Write an instance file");
  gen->add_flag("--random", o.random, "Random KOCRS instance");
  gen->add_option("--fixture", o.fixture, "Built-in instance to write");
  gen->add_option("--delta", o.delta, "Fixture parameter delta");
  gen->add_option("--epsilon", o.epsilon, "Fixture or binary-mode epsilon");
  gen->add_option("--setting", o.setting, "hard or soft (random default: soft)");
  gen->add_option("--n", o.n, "Item count");
  gen->add_option("--max-atoms", o.max_atoms, "Atoms per item");
  gen->add_option("--seed", o.seed, "Generator seed");
  gen->add_flag("--binary", o.binary, "Only sizes epsilon and 1");
  gen->add_flag("--osgap", o.osgap, "Random OSGAP instance instead");
  gen->add_option("--m", o.m, "OSGAP knapsack count");
  gen->add_option("--max-types", o.max_types, "OSGAP types per item");
  gen->add_flag("--type-independent", o.type_independent, "OSGAP values do not depend on the type");
  gen->add_option("-o,--output", o.output, "Output path (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (o.osgap) o.instance_seed = o.seed;
  try {
    if (eval->parsed()) return cmd_eval(o, out);
    if (sim->parsed()) return cmd_simulate(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (osg->parsed()) return cmd_osgap(o, out);
    if (gen->parsed()) return cmd_gen(o, out);
  } catch (const Error& e) {
    err << "kocrs: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "kocrs: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace kocrs::cli
