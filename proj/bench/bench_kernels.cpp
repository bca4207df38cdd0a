// Serial reference vs OpenMP kernels on the workloads verify_theorem runs.

#include <benchmark/benchmark.h>

#include "orthostab/kernels.hpp"

using namespace orthostab;

namespace {

PexiderTriple triple() {
  return make_pexider_instance(Matrix::from_rows({{1.5, -0.5}}), 0.25, 0.25, 0.25, {11, 12, 13},
                               OrthoRelation::inner_product());
}

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_PremiseResiduals(benchmark::State& st) {
  const PexiderTriple t = triple();
  PairSampler s(1, 2);
  const auto pairs = sample_orthogonal_pairs(t.relation, s, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::premise_residuals(t, pairs, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * st.range(1));
  st.SetLabel(exec_of(st) == Exec::Serial ? "serial" : "openmp");
}

void BM_HyersBatch(benchmark::State& st) {
  const PexiderTriple t = triple();
  PairSampler s(2, 2);
  const auto probes = negation_closed_probes(s, static_cast<std::size_t>(st.range(1)) / 2);
  HyersOptions o;
  o.n_max = 30;
  o.epsilon = t.epsilon_design;
  const VectorMap f = as_map(t.f);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::hyers_batch(f, probes, o, HyersScaling::Additive, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * st.range(1));
  st.SetLabel(exec_of(st) == Exec::Serial ? "serial" : "openmp");
}

void BM_BirkhoffJamesPremise(benchmark::State& st) {
  PexiderTriple t = triple();
  t.relation = OrthoRelation::birkhoff_james(NormSpec::linf());
  PairSampler s(3, 2);
  const auto pairs = sample_orthogonal_pairs(t.relation, s, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::premise_residuals(t, pairs, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * st.range(1));
  st.SetLabel(exec_of(st) == Exec::Serial ? "serial" : "openmp");
}

}  // namespace

BENCHMARK(BM_PremiseResiduals)->ArgsProduct({{0, 1}, {10000, 100000}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HyersBatch)->ArgsProduct({{0, 1}, {2000, 20000}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BirkhoffJamesPremise)->ArgsProduct({{0, 1}, {10000}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
