#include <benchmark/benchmark.h>
#include <omp.h>

#include "rprime/counting.hpp"
#include "rprime/multsieve.hpp"

using namespace rprime;

namespace
{

const FieldDescriptor& gaussian()
{
    static const FieldDescriptor f = make_quadratic(-1);
    return f;
}

const FieldDescriptor& cubic()
{
    static const FieldDescriptor f = make_monogenic({-1, -1, 0, 1});
    return f;
}

void BM_sieve_reference(benchmark::State& state)
{
    const auto N = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_tables_reference(gaussian(), N));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_sieve_parallel(benchmark::State& state)
{
    const auto N = static_cast<std::uint64_t>(state.range(0));
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(build_tables(gaussian(), N));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_sieve_parallel_cubic(benchmark::State& state)
{
    const auto N = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_tables(cubic(), N));
}

void BM_moebius_reference(benchmark::State& state)
{
    static const CoeffTable t = build_tables(gaussian(), 4'000'000);
    for (auto _ : state) benchmark::DoNotOptimize(moebius_sum_reference(t, t.N, 1, 2));
}

void BM_moebius_parallel(benchmark::State& state)
{
    static const CoeffTable t = build_tables(gaussian(), 4'000'000);
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(moebius_sum(t, t.N, 1, 2));
}

} // namespace

BENCHMARK(BM_sieve_reference)->Arg(1 << 20)->Arg(1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sieve_parallel)->Args({1 << 20, 1})->Args({1 << 22, 1})->Args({1 << 22, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sieve_parallel_cubic)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_moebius_reference)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_moebius_parallel)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
