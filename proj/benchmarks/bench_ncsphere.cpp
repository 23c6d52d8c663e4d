#include <benchmark/benchmark.h>

#include "ncsphere/models.hpp"
#include "ncsphere/partition.hpp"
#include "ncsphere/relations.hpp"
#include "ncsphere/tensor.hpp"
#include "ncsphere/weingarten.hpp"

using namespace ncs;

static void BM_EnumeratePairings(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate(PartitionClass::P2, 0, n));
}
BENCHMARK(BM_EnumeratePairings)->DenseRange(4, 10, 2);

static void BM_TwistedMap(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const auto p = Partition::parse("abcd|dcba");
    for (auto _ : state) benchmark::DoNotOptimize(t_map(p, N, true));
}
BENCHMARK(BM_TwistedMap)->DenseRange(2, 5);

static void BM_WeingartenOrthogonal(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const GroupSpec g(Field::real, Level::classical);
    for (auto _ : state) benchmark::DoNotOptimize(weingarten_matrix(g, real_word(k), 10));
    state.SetLabel("k=" + std::to_string(k) + ", N=10");
}
BENCHMARK(BM_WeingartenOrthogonal)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_Moment(benchmark::State& state) {
    const GroupSpec g(Field::real, Level::half);
    const WeingartenTable tab(g, real_word(6), 4);
    const IndexTuple i = {0, 0, 1, 1, 2, 2}, j = {0, 1, 0, 1, 2, 2};
    for (auto _ : state) benchmark::DoNotOptimize(tab.moment(i, j));
}
BENCHMARK(BM_Moment);

static void BM_SaturateHalf(benchmark::State& state) {
    const RelationSystem sys = sphere_relations(SphereSpec(Field::real, Level::half, true));
    const Bounds b{static_cast<int>(state.range(0)), 4};
    for (auto _ : state) benchmark::DoNotOptimize(Saturation(sys, b).fact_count());
}
BENCHMARK(BM_SaturateHalf)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_ClassifyReversal(benchmark::State& state) {
    const std::vector<Permutation> E = {parse_permutation("321")};
    for (auto _ : state) benchmark::DoNotOptimize(classify_monomial_sphere(E, {Field::complex, true}));
}
BENCHMARK(BM_ClassifyReversal)->Unit(benchmark::kMillisecond);

static void BM_HaarMoment(benchmark::State& state) {
    const long samples = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(haar_moment_mc(HaarGroup::orthogonal, 3, {0, 0, 0, 0}, {0, 0, 0, 0}, {}, samples, 1));
    state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_HaarMoment)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
