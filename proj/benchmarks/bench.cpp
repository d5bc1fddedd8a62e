#include <benchmark/benchmark.h>

#include "psdrank/extraction.hpp"
#include "psdrank/factorization.hpp"
#include "psdrank/gadgets.hpp"
#include "psdrank/instance.hpp"
#include "psdrank/search.hpp"
#include "psdrank/witness.hpp"

using namespace psdrank;

static void BM_BuildB(benchmark::State& state) {
  const Polynomial f = parse_polynomial(state.range(0) ? "x1*x1 + x1 - 1" : "x1*x1 - 1");
  for (auto _ : state) benchmark::DoNotOptimize(build_B(f));
}
BENCHMARK(BM_BuildB)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SqrtCheck(benchmark::State& state) {
  const IncompleteMatrix B = build_B(parse_polynomial("x1*x1 - 1"));
  for (auto _ : state) benchmark::DoNotOptimize(sqrt_condition_check(B));
}
BENCHMARK(BM_SqrtCheck)->Unit(benchmark::kMillisecond);

static void BM_SampledVerify(benchmark::State& state) {
  const Polynomial f = parse_polynomial("x1*x1 - 1");
  const ExactFactorization F = assemble_instance_witness(f, ExactPoint{{x_var(1), 1}});
  const InstanceMatrix M = build_M(build_B(f), 144);
  VerifyOptions opt;
  opt.mode = VerifyMode::sampled;
  opt.samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_factorization(M, F, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampledVerify)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_Search(benchmark::State& state) {
  const InstanceMatrix A = build_P(2);
  SearchConfig cfg;
  cfg.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(psd_rank_search(A, 2, cfg));
}
BENCHMARK(BM_Search)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
