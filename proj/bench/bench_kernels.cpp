// Serial and OpenMP variants of the Gram and Bergman kernels on product surfaces.

#include <benchmark/benchmark.h>

#include <random>

#include "triples/sections/sections.hpp"

using triples::sections::Exec;

namespace {

struct Inputs {
    Eigen::MatrixXd T1, V, T2, Q;
};

// Section norm tables for exponents 0..k over `nodes` nodes per factor.
Inputs make_inputs(int k, int nodes) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Inputs in;
    in.T1 = Eigen::MatrixXd::NullaryExpr(k + 1, nodes, [&] { return u(rng); });
    in.T2 = Eigen::MatrixXd::NullaryExpr(k + 1, nodes, [&] { return u(rng); });
    in.V = Eigen::MatrixXd::NullaryExpr(nodes, nodes, [&] { return u(rng); });
    in.Q = Eigen::MatrixXd::NullaryExpr(k + 1, k + 1, [&] { return u(rng); });
    return in;
}

void BM_gram(benchmark::State& state, Exec exec) {
    const Inputs in = make_inputs(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(triples::sections::gram_kernel(in.T1, in.V, in.T2, exec));
}

void BM_bergman(benchmark::State& state, Exec exec) {
    const Inputs in = make_inputs(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(triples::sections::bergman_kernel(in.T1, in.Q, in.T2, exec));
}

void sizes(benchmark::internal::Benchmark* b) {
    for (int k : {16, 48}) {
        for (int nodes : {100, 200}) b->Args({k, nodes});
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_gram, serial, Exec::Serial)->Apply(sizes);
BENCHMARK_CAPTURE(BM_gram, openmp, Exec::Parallel)->Apply(sizes);
BENCHMARK_CAPTURE(BM_bergman, serial, Exec::Serial)->Apply(sizes);
BENCHMARK_CAPTURE(BM_bergman, openmp, Exec::Parallel)->Apply(sizes);

BENCHMARK_MAIN();
