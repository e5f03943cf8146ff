#include <benchmark/benchmark.h>

#include "flagrig/flag.hpp"
#include "flagrig/gradedaut.hpp"
#include "flagrig/rng.hpp"

using namespace flagrig;

static void BM_bracket(benchmark::State& state) {
    Rng rng(1);
    const int n = static_cast<int>(state.range(0));
    LieElement a = random_lie(rng, n, Field::R, 100);
    LieElement b = random_lie(rng, n, Field::R, 100);
    for (auto _ : state) benchmark::DoNotOptimize(bracket(a, b));
}
BENCHMARK(BM_bracket)->Arg(4)->Arg(6);

static void BM_exp_log_roundtrip(benchmark::State& state) {
    Rng rng(2);
    LieElement a = random_lie(rng, static_cast<int>(state.range(0)), Field::R, 100);
    for (auto _ : state) benchmark::DoNotOptimize(log(exp(a)));
}
BENCHMARK(BM_exp_log_roundtrip)->Arg(4)->Arg(6);

static void BM_alpha_roundtrip(benchmark::State& state) {
    Rng rng(3);
    GroupElement g = random_group(rng, static_cast<int>(state.range(0)), Field::R, 100);
    for (auto _ : state) benchmark::DoNotOptimize(alpha_inverse(alpha(g)));
}
BENCHMARK(BM_alpha_roundtrip)->Arg(4)->Arg(6);

static void BM_flag_canonicalize(benchmark::State& state) {
    Rng rng(4);
    Mat b = random_invertible(rng, static_cast<int>(state.range(0)), Field::H, 20);
    for (auto _ : state) benchmark::DoNotOptimize(Flag(b));
}
BENCHMARK(BM_flag_canonicalize)->Arg(4)->Arg(6);

static void BM_classify(benchmark::State& state) {
    Rng rng(5);
    AutCertificate cert = random_certificate(rng, static_cast<int>(state.range(0)), Field::H);
    GradedMap m = construct_from_certificate(static_cast<int>(state.range(0)), Field::H, cert);
    for (auto _ : state) benchmark::DoNotOptimize(classify(m));
}
BENCHMARK(BM_classify)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
