#include <benchmark/benchmark.h>

#include "scalekit/matrix_scaling.hpp"
#include "scalekit/operator_scaling.hpp"
#include "scalekit/permanent.hpp"
#include "scalekit/rng.hpp"
#include "scalekit/tensor_scaling.hpp"

using namespace scalekit;

namespace {

NonNegMatrix random_matrix(int n, std::uint64_t seed) {
    Rng rng(seed);
    NonNegMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a.set(i, j, Rational(static_cast<long>(rng.uniform_int(1, 255)), 256));
    return a;
}

MatrixTuple random_tuple(int m, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ComplexMatrix> mats;
    for (int k = 0; k < m; ++k) {
        ComplexMatrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = Complex(static_cast<double>(rng.uniform_int(-4, 4)), 0.0);
        mats.push_back(std::move(a));
    }
    return MatrixTuple(n, std::move(mats));
}

}  // namespace

static void BM_Sinkhorn(benchmark::State& state) {
    const NonNegMatrix a = random_matrix(static_cast<int>(state.range(0)), 7);
    SinkhornOptions opt;
    opt.eps = 1e-6;
    opt.track_potential = false;
    for (auto _ : state) {
        const ScalingReport r = sinkhorn(a, opt);
        benchmark::DoNotOptimize(r.ds_final);
    }
}
BENCHMARK(BM_Sinkhorn)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

static void BM_Gurvits(benchmark::State& state) {
    const MatrixTuple t = random_tuple(3, static_cast<int>(state.range(0)), 11);
    GurvitsOptions opt;
    opt.eps = 1e-4;
    for (auto _ : state) {
        const ScalingReport r = gurvits_scale(t, opt);
        benchmark::DoNotOptimize(r.ds_final);
    }
}
BENCHMARK(BM_Gurvits)->Arg(3)->Arg(5)->Arg(8);

static void BM_TensorMarginals(benchmark::State& state) {
    Rng rng(13);
    const int n = static_cast<int>(state.range(0));
    TensorTuple t({n, n, n}, 2);
    for (int i = 0; i < t.m(); ++i)
        for (Complex& z : t.tensor(i)) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (auto _ : state) {
        const Marginals m = marginals(t);
        benchmark::DoNotOptimize(m.rho.front()(0, 0));
    }
}
BENCHMARK(BM_TensorMarginals)->Arg(2)->Arg(4)->Arg(8);

static void BM_PermanentExact(benchmark::State& state) {
    const NonNegMatrix a = random_matrix(static_cast<int>(state.range(0)), 17);
    for (auto _ : state) {
        const Rational p = permanent_exact(a);
        benchmark::DoNotOptimize(p.get_d());
    }
}
BENCHMARK(BM_PermanentExact)->Arg(6)->Arg(8)->Arg(10)->Arg(12);

static void BM_DetPolyOracle(benchmark::State& state) {
    const MatrixTuple t = random_tuple(3, static_cast<int>(state.range(0)), 19);
    for (auto _ : state) {
        const DetPolyResult r = detpoly_oracle(t, t.n - 1, 1, 23);
        benchmark::DoNotOptimize(r.nonzero);
    }
}
BENCHMARK(BM_DetPolyOracle)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
