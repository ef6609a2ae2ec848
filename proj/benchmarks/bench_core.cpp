// Microbenchmarks for the hot paths: tensor powers, Hermitian
// eigensolves, cone angle scans, the occupation-count simplex and the
// alternating-projection witness search. Fixtures are seeded so numbers
// are comparable across runs.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "paradis/feasibility.hpp"
#include "paradis/linalg.hpp"
#include "paradis/numrange.hpp"
#include "paradis/salpha.hpp"
#include "paradis/subspace.hpp"

namespace {

using paradis::CMat;
using paradis::Cx;

CMat random_complex(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMat m = CMat::zeros(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Cx(g(rng), g(rng));
    return m;
}

CMat random_hermitian(int d, std::mt19937_64& rng) {
    return paradis::herm_part(random_complex(d, d, rng));
}

void bm_kron_power(benchmark::State& state) {
    std::mt19937_64 rng(11);
    const CMat base = random_complex(3, 3, rng);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        CMat out = paradis::kron_power(base, n);
        benchmark::DoNotOptimize(out.a.data());
    }
}
BENCHMARK(bm_kron_power)->DenseRange(2, 5);

void bm_eigh(benchmark::State& state) {
    std::mt19937_64 rng(23);
    const int d = static_cast<int>(state.range(0));
    const CMat a = random_hermitian(d, rng);
    for (auto _ : state) {
        paradis::EigDecomposition e = paradis::eigh(a);
        benchmark::DoNotOptimize(e.values.data());
    }
}
BENCHMARK(bm_eigh)->Arg(16)->Arg(64)->Arg(256);

void bm_psd_project(benchmark::State& state) {
    std::mt19937_64 rng(37);
    const int d = static_cast<int>(state.range(0));
    const CMat a = random_hermitian(d, rng);
    for (auto _ : state) {
        CMat p = paradis::psd_project(a);
        benchmark::DoNotOptimize(p.a.data());
    }
}
BENCHMARK(bm_psd_project)->Arg(16)->Arg(64);

// Non-normal input so the scan sees a genuinely curved boundary.
void bm_field_angle(benchmark::State& state) {
    std::mt19937_64 rng(41);
    const int d = static_cast<int>(state.range(0));
    CMat a = random_complex(d, d, rng);
    const CMat shift = paradis::scale(Cx(2.5 * d, 0.0), CMat::identity(d));
    a = paradis::add(a, shift);
    for (auto _ : state) {
        paradis::FieldAngleReport r = paradis::field_angle(a);
        benchmark::DoNotOptimize(r.theta);
    }
}
BENCHMARK(bm_field_angle)->Arg(4)->Arg(16);

// Occupation-count system at a feasible and an infeasible angle; the
// simplex does the bulk of the work, system assembly is trivial.
void bm_reduced_solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double alpha = state.range(1) ? 2.0 : 1.6;
    const paradis::SAlphaSystem sys = paradis::build_reduced_system(n, alpha);
    for (auto _ : state) {
        paradis::SAlphaSolveResult r = paradis::solve_nonneg(sys);
        benchmark::DoNotOptimize(r.phase1_objective);
    }
}
BENCHMARK(bm_reduced_solve)
    ->ArgsProduct({{4, 8, 12}, {0, 1}})
    ->ArgNames({"n", "feas"});

// Full threshold scan at coarse grid, the dominant cost of the family
// sweep tool.
void bm_threshold_scan(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        paradis::ThresholdReport r = paradis::threshold_alpha(n, 2e-2, 1e-4);
        benchmark::DoNotOptimize(r.alpha_star);
    }
}
BENCHMARK(bm_threshold_scan)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

// Witness search on one copy of the qutrit family at alpha = pi, where
// a diagonal witness exists and both races finish quickly.
void bm_density_in_complement(benchmark::State& state) {
    const std::vector<CMat> gens = paradis::salpha_generators(3.14159265358979323846);
    for (auto _ : state) {
        paradis::FeasibilityOutcome out = paradis::density_in_complement(gens);
        benchmark::DoNotOptimize(out.projection_residual);
    }
}
BENCHMARK(bm_density_in_complement)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
