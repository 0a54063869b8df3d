#include <benchmark/benchmark.h>

#include "mcsched/simulator.hpp"

using namespace mcsched;

namespace {

SchedulerConfig config() {
    SchedulerConfig cfg;
    cfg.weights = {52.5, 42.5, 5.0};
    return cfg;
}

EventTrace default_trace(std::uint64_t seed) {
    return generate_trace(GeneratorConfig{}, seed);
}

void BM_GenerateTrace(benchmark::State& state) {
    GeneratorConfig generator;
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_trace(generator, seed++));
}
BENCHMARK(BM_GenerateTrace);

void BM_RunPolicy(benchmark::State& state, Policy policy) {
    EventTrace trace = default_trace(1);
    SchedulerConfig cfg = config();
    for (auto _ : state)
        benchmark::DoNotOptimize(run(trace, policy, cfg));
}
BENCHMARK_CAPTURE(BM_RunPolicy, k4s, Policy::K4s)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunPolicy, least_allocated, Policy::LeastAllocated)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunPolicy, most_allocated, Policy::MostAllocated)
    ->Unit(benchmark::kMillisecond);

void BM_ScheduleK4s(benchmark::State& state) {
    // One arrival against a mid-size loaded cluster.
    GeneratorConfig generator;
    generator.initial_nodes = {10, 10};
    generator.job_count = {200, 200};
    EventTrace trace = generate_trace(generator, 3);
    SchedulerConfig cfg = config();

    ClusterState snapshot;
    RunOptions opts;
    std::size_t count = 0, cut = trace.events.size() / 2;
    opts.after_event = [&](const ClusterState& s) {
        if (count++ == cut) snapshot = s;
    };
    run(trace, Policy::K4s, cfg, opts);

    Job probe{.id = 1 << 20, .request = {300, 300, 300}, .limit = {450, 450, 450}};
    for (auto _ : state) {
        ClusterState working = snapshot;
        working.jobs_catalog.emplace(probe.id, probe);
        working.pending.push_back(probe.id);
        benchmark::DoNotOptimize(schedule_k4s(working, probe.id, cfg));
    }
}
BENCHMARK(BM_ScheduleK4s)->Unit(benchmark::kMicrosecond);

void BM_Rebalance(benchmark::State& state) {
    GeneratorConfig generator;
    generator.initial_nodes = {8, 8};
    generator.job_count = {150, 150};
    EventTrace trace = generate_trace(generator, 5);
    SchedulerConfig cfg = config();

    ClusterState snapshot;
    RunOptions opts;
    opts.rebalance_on = RebalanceTrigger::Never;
    std::size_t count = 0, cut = trace.events.size() / 2;
    opts.after_event = [&](const ClusterState& s) {
        if (count++ == cut) snapshot = s;
    };
    run(trace, Policy::K4s, cfg, opts);

    for (auto _ : state) {
        ClusterState working = snapshot;
        benchmark::DoNotOptimize(rebalance(working, cfg, 100));
    }
}
BENCHMARK(BM_Rebalance)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
