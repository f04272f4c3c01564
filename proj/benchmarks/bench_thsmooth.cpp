// Micro and end-to-end timings. Full-size smoothing runs take minutes; use
// --benchmark_filter to pick them.

#include <benchmark/benchmark.h>

#include <optional>
#include <random>
#include <vector>

#include "thsmooth/thsmooth.hpp"

using namespace thsmooth;

namespace {

void BM_TruncatedHuber(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> x(4096);
    for (double& v : x) v = U(rng);
    const HuberSpec spec{1e-7, 0.1};
    for (auto _ : state) {
        double s = 0.0;
        for (double v : x) s += truncated_huber(v, spec) + mu_update(v - l_update(v, spec), spec.a);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.size()));
}
BENCHMARK(BM_TruncatedHuber);

struct Stage {
    ImageGrid f;
    SmoothingParams p;
    std::vector<double> plane;
    AuxFields aux;
    WeightField weights;
};

Stage make_stage(int side, int r) {
    ImageGrid f = to_gray(make_bench_image(side, side));
    SmoothingParams p = preset(Preset::group4_texture, {.radius = r});
    std::vector<double> plane = f.channel_plane(0);
    AuxFields aux = compute_aux(f.extent(), plane, plane, p);
    WeightField weights = build_weight_field(f, p);
    return {std::move(f), p, std::move(plane), std::move(aux), std::move(weights)};
}

void BM_UpdateAux(benchmark::State& state) {
    Stage s = make_stage(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) update_aux(s.aux, s.plane, s.plane, s.p);
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.plane.size()));
}
BENCHMARK(BM_UpdateAux)->ArgsProduct({{256}, {1, 2, 3}})->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
    Stage s = make_stage(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) {
        SparseSystem sys = assemble(s.plane, s.plane, s.aux, s.weights, s.p);
        benchmark::DoNotOptimize(sys.diag.data());
    }
}
BENCHMARK(BM_Assemble)->ArgsProduct({{256}, {1, 2, 3}})->Unit(benchmark::kMillisecond);

// System of the last outer iteration, where locked pairs make it stiff.
void BM_Solve(benchmark::State& state) {
    const ImageGrid f = to_gray(make_bench_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(0))));
    const SmoothingParams p = preset(Preset::group4_texture, {.radius = 1});
    std::optional<SparseSystem> sys;
    SmoothOptions capture;
    capture.on_system = [&](int k, int, const SparseSystem& s) {
        if (k == p.n_iters - 1) sys = s;
    };
    SmoothingParams before = p;
    before.n_iters = p.n_iters - 1;
    const std::vector<double> start = smooth(f, f, before).u.channel_plane(0);
    (void)smooth(f, f, p, capture);
    SolveOptions opt;
    opt.preconditioner = state.range(1) == 0 ? Preconditioner::jacobi : Preconditioner::incomplete_cholesky;
    std::size_t iterations = 0;
    for (auto _ : state) {
        SolveResult res = solve(*sys, start, opt);
        iterations = res.iterations;
        benchmark::DoNotOptimize(res.solution.data());
    }
    state.counters["cg_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_Solve)->ArgsProduct({{128, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

// Full bench regime: group4_texture, lambda 0.5, N = 10 on an RGB card.
void BM_Smooth(benchmark::State& state) {
    const ImageGrid f = make_bench_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const SmoothingParams p = preset(Preset::group4_texture, {.radius = static_cast<int>(state.range(2))});
    for (auto _ : state) {
        SmoothResult res = smooth(f, f, p);
        benchmark::DoNotOptimize(res.u.data().data());
    }
}
BENCHMARK(BM_Smooth)
    ->ArgsProduct({{150}, {200}, {1, 2, 3}})
    ->Args({600, 800, 1})
    ->Unit(benchmark::kSecond)
    ->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
