#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "multici/optimizer.hpp"
#include "multici/problems.hpp"
#include "multici/rng.hpp"
#include "multici/stats.hpp"

namespace {

void BM_Evaluate(benchmark::State& state, const char* id) {
    const auto problem = multici::get_problem(id);
    std::mt19937_64 rng(1);
    std::vector<double> x(static_cast<std::size_t>(problem.dimension));
    for (int i = 0; i < problem.dimension; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        x[ui] = multici::uniform_in(rng, problem.bounds.lower[ui], problem.bounds.upper[ui]);
    }
    for (auto _ : state) benchmark::DoNotOptimize(problem.evaluate(x));
}
BENCHMARK_CAPTURE(BM_Evaluate, sphere30, "F44");
BENCHMARK_CAPTURE(BM_Evaluate, ackley30, "F5");
BENCHMARK_CAPTURE(BM_Evaluate, rastrigin30, "F33");
BENCHMARK_CAPTURE(BM_Evaluate, foxholes, "F1");

void BM_LearningAttempt(benchmark::State& state) {
    const auto problem = multici::get_problem("F44");
    multici::MultiCiConfig cfg;
    cfg.seed = 7;
    std::mt19937_64 rng(cfg.seed);
    multici::CohortState s = multici::initialize(cfg, problem, rng);
    for (auto _ : state) multici::learning_attempt(s, cfg, problem, rng);
}
BENCHMARK(BM_LearningAttempt);

void BM_FullRun_Sphere2D(benchmark::State& state) {
    const auto problem = multici::get_problem("A1");
    multici::MultiCiConfig cfg = multici::MultiCiConfig::desk_example();
    cfg.seed = 3;
    for (auto _ : state) benchmark::DoNotOptimize(multici::run(cfg, problem));
}
BENCHMARK(BM_FullRun_Sphere2D)->Unit(benchmark::kMillisecond);

void BM_Wilcoxon30(benchmark::State& state) {
    std::vector<double> a(30), b(30);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        a[static_cast<std::size_t>(i)] = multici::uniform01(rng);
        b[static_cast<std::size_t>(i)] = multici::uniform01(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(multici::wilcoxon_signed_rank(a, b, 0.05));
}
BENCHMARK(BM_Wilcoxon30);

void BM_WilcoxonExact12(benchmark::State& state) {
    std::vector<double> a(12), b(12);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 12; ++i) {
        a[static_cast<std::size_t>(i)] = multici::uniform01(rng);
        b[static_cast<std::size_t>(i)] = multici::uniform01(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(multici::wilcoxon_signed_rank(a, b, 0.05));
}
BENCHMARK(BM_WilcoxonExact12);

}  // namespace

BENCHMARK_MAIN();
