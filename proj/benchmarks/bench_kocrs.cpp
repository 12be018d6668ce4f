#include <benchmark/benchmark.h>

#include "kocrs/evaluation.hpp"
#include "kocrs/instances.hpp"
#include "kocrs/lp.hpp"
#include "kocrs/osgap.hpp"
#include "kocrs/policy.hpp"

using namespace kocrs;

namespace {

KocrsInstance random_hard(std::size_t n) {
  RandomKocrsSpec spec;
  spec.n = n;
  spec.max_atoms = 3;
  spec.seed = 42;
  return random_kocrs(spec);
}

void BM_StepExact(benchmark::State& st) {
  const auto inst = random_hard(static_cast<std::size_t>(st.range(0)));
  const auto trace = trace_exact(inst, Policy::Aggressive, Rational(1, 3));
  const auto& state = trace.states.back();
  const auto& item = inst.items.back();
  const auto& rule = trace.rules.back();
  for (auto _ : st) benchmark::DoNotOptimize(step_exact(trace.states[trace.states.size() - 2], item, rule));
  st.counters["alive_atoms"] = static_cast<double>(state.alive.size());
}
BENCHMARK(BM_StepExact)->Arg(4)->Arg(8)->Arg(12);

void BM_EvaluateExact(benchmark::State& st) {
  const auto inst = random_hard(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_exact(inst, Policy::Aggressive, Rational(1, 3)));
}
BENCHMARK(BM_EvaluateExact)->Arg(4)->Arg(8)->Arg(12);

void BM_EvaluateThm41(benchmark::State& st) {
  const auto inst = thm41_instance(Rational(1, 10), Rational(1, 200));
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_exact(inst, Policy::Aggressive, Rational(1, 2)));
}
BENCHMARK(BM_EvaluateThm41);

void BM_Simulate(benchmark::State& st) {
  const auto inst = thm31_instance(Rational(1, 100));
  const auto trials = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(simulate(inst, Policy::Aggressive, Rational(1, 3), trials, 1, 1));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(trials));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SimplexOsgap(benchmark::State& st) {
  RandomOsgapSpec spec;
  spec.n = static_cast<std::size_t>(st.range(0));
  spec.knapsacks = 2;
  spec.seed = 7;
  const auto lp = build_lp(random_osgap(spec)).lp;
  for (auto _ : st) benchmark::DoNotOptimize(simplex_solve(lp));
  st.counters["columns"] = static_cast<double>(lp.columns());
}
BENCHMARK(BM_SimplexOsgap)->Arg(3)->Arg(5)->Arg(10);

void BM_RoundOnline(benchmark::State& st) {
  RandomOsgapSpec spec;
  spec.n = 5;
  spec.seed = 7;
  const auto inst = random_osgap(spec);
  const auto sol = solve_osgap_lp(inst);
  for (auto _ : st) {
    benchmark::DoNotOptimize(round_online(inst, sol, Rational(1, 2), Policy::Aggressive, Setting::Soft, 10000, 1, 1));
  }
}
BENCHMARK(BM_RoundOnline)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
