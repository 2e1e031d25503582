#include <benchmark/benchmark.h>

#include <random>

#include "wittkit/almost.hpp"
#include "wittkit/modifications.hpp"
#include "wittkit/ringspec.hpp"
#include "wittkit/runner.hpp"
#include "wittkit/towers.hpp"
#include "wittkit/witt.hpp"
#include "wittkit/witt_checks.hpp"

using namespace wittkit;

namespace {

void BM_WittMul(benchmark::State& state) {
  const long p = state.range(0);
  const int n = static_cast<int>(state.range(1));
  (void)derive_witt_polynomial(p, n, WittKind::Product);
  std::mt19937_64 rng(1);
  const auto x = random_witt_vector(p, ipow(p, 6), n, rng);
  const auto y = random_witt_vector(p, ipow(p, 6), n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(witt_mul(x, y));
}
BENCHMARK(BM_WittMul)->Args({2, 2})->Args({3, 2})->Args({2, 3});

void BM_WittAdd(benchmark::State& state) {
  const long p = state.range(0);
  const int n = static_cast<int>(state.range(1));
  (void)derive_witt_polynomial(p, n, WittKind::Sum);
  std::mt19937_64 rng(2);
  const auto x = random_witt_vector(p, 0, n, rng);
  const auto y = random_witt_vector(p, 0, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(witt_add(x, y));
}
BENCHMARK(BM_WittAdd)->Args({2, 3})->Args({3, 2});

// Derivations are memoized per process; after the first iteration this is
// the cached lookup plus the record bookkeeping.
void BM_DerivePolynomials(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(derive_all(2, n).size());
}
BENCHMARK(BM_DerivePolynomials)->Arg(2)->Arg(3);

void BM_FrobeniusReport(benchmark::State& state) {
  TowerSpec spec;
  spec.kind = TowerKind::Ramified;
  spec.p = 3;
  spec.d = 2;
  spec.G = "t1^2+t2^3";
  spec.N = 5;
  spec.D = 6;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(frob_surjectivity_report(spec, n, 6).rooted);
}
BENCHMARK(BM_FrobeniusReport)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Modification(benchmark::State& state) {
  const auto env = build_environment(parse_ringspec("algebra T { p=3; vars=x1, x2; mod=p^1; cap=3; }"));
  const auto& T = env.algebras.at("T");
  const auto M = module_from_algebra(T);
  const auto x1 = T->var("x1"), x2 = T->var("x2");
  const ParameterRelation rel{1, {x1, x2}, {to_vector(x2), to_vector(x1)}};
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto mod = build_modification(M, rel, N);
    benchmark::DoNotOptimize(check_trivialization(mod).holds);
  }
}
BENCHMARK(BM_Modification)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SplitSuite(benchmark::State& state) {
  const auto plan = parse_ringspec(
      "algebra R { p=3; vars=x; mod=p^6; cap=6; }\n"
      "check split Main { base=R; h=z^2 - 3*(1+x); sop=3, x; k=3; }\n");
  RunOptions opts;
  opts.timing = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_checks(plan, opts).pass());
}
BENCHMARK(BM_SplitSuite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
