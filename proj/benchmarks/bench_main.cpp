#include <benchmark/benchmark.h>

#include "bmospline/bspline.hpp"
#include "bmospline/corpus.hpp"
#include "bmospline/norms.hpp"
#include "bmospline/nterm.hpp"

using namespace bmospline;

namespace {

const MultilevelPartition& partition(int L) {
  static const MultilevelPartition p6 =
      MultilevelPartition::build_dyadic({-1.0, 2.0}, 6, 2);
  static const MultilevelPartition p8 =
      MultilevelPartition::build_dyadic({-1.0, 2.0}, 8, 2);
  return L == 6 ? p6 : p8;
}

void bm_decompose(benchmark::State& state) {
  int L = static_cast<int>(state.range(0));
  const MultilevelPartition& p = partition(L);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Func f = corpus_function("bump");
  for (auto _ : state) {
    SplineDecomposition dec = decompose(f, p, rule);
    benchmark::DoNotOptimize(dec.levels);
  }
}
BENCHMARK(bm_decompose)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void bm_bmo_norm(benchmark::State& state) {
  const MultilevelPartition& p = partition(6);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Func f = corpus_function("cusp05");
  for (auto _ : state) {
    BmoEstimate e = bmo_norm(f, p, 1.0, rule);
    benchmark::DoNotOptimize(e.value);
  }
}
BENCHMARK(bm_bmo_norm)->Unit(benchmark::kMillisecond);

void bm_besov_e(benchmark::State& state) {
  const MultilevelPartition& p = partition(6);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Func f = corpus_function("cusp05");
  for (auto _ : state) {
    BesovNorm n = besov_norm_E(f, p, 0.5, 2, 2.0, rule);
    benchmark::DoNotOptimize(n.value);
  }
}
BENCHMARK(bm_besov_e)->Unit(benchmark::kMillisecond);

void bm_greedy_select(benchmark::State& state) {
  const MultilevelPartition& p = partition(8);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  SplineDecomposition dec = decompose(corpus_function("cusp05"), p, rule);
  for (auto _ : state) {
    auto sel = greedy_select(dec, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(sel.size());
  }
}
BENCHMARK(bm_greedy_select)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
