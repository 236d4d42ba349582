#include "covkit/covers.hpp"
#include "covkit/gfmat.hpp"
#include "covkit/oracle.hpp"
#include "covkit/partitions.hpp"
#include "covkit/reduce.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace covkit;

namespace {

FieldMatrix random_matrix(std::uint32_t q, std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Residue> e(rows * cols);
    for (auto& x : e) x = static_cast<Residue>(rng() % q);
    return FieldMatrix(PrimeField(q), rows, cols, std::move(e));
}

void BM_Rref(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const FieldMatrix m = random_matrix(3, n, n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(rref(m));
}
BENCHMARK(BM_Rref)->RangeMultiplier(2)->Range(8, 128);

void BM_ParityCheck(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const FieldMatrix a = random_matrix(2, 2 * n, n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(parity_check(a));
}
BENCHMARK(BM_ParityCheck)->RangeMultiplier(2)->Range(8, 128);

void BM_CoverFromRandomFamily(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const Rational alpha(1, 10);
    const Rational eps(1, 2);
    const auto fam = random_family(m, 2, alpha, eps, 3).family;
    for (auto _ : state) benchmark::DoNotOptimize(cover_from_partition_family(fam, alpha, eps));
}
BENCHMARK(BM_CoverFromRandomFamily)->Arg(10)->Arg(20)->Arg(30);

void BM_MldEnumeration(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const FieldMatrix h = random_matrix(2, n / 2, n, 4);
    // A random syndrome is almost surely beyond weight 3, so the whole ball is enumerated.
    std::mt19937_64 rng(5);
    FieldVector u(PrimeField(2), n / 2);
    for (std::size_t i = 0; i < u.size(); ++i) u.set(i, static_cast<Residue>(rng() % 2));
    for (auto _ : state) benchmark::DoNotOptimize(solve_mld_min_weight(h, u, 3));
}
BENCHMARK(BM_MldEnumeration)->Arg(24)->Arg(32)->Arg(48);

void BM_Pipeline(benchmark::State& state) {
    const PlantedMaxLin p = gen_planted_maxlin(10, 20, 2, Rational(9, 10), 11);
    PipelineOptions opts;
    opts.k = 3;
    opts.epsilon = Rational(1, 2);
    opts.seed = 11;
    for (auto _ : state) benchmark::DoNotOptimize(pipeline_maxlin_to_kmld(p.instance, opts));
}
BENCHMARK(BM_Pipeline);

}  // namespace
BENCHMARK_MAIN();
