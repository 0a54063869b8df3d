#include "doctest.h"

#include "mcsched/trace_io.hpp"
#include "support/test_helpers.hpp"

using namespace mcsched;
using mcsched::testing::default_scheduler_config;

namespace {

GeneratorConfig small_config() {
    GeneratorConfig cfg;
    cfg.initial_nodes = {2, 4};
    cfg.job_count = {20, 60};
    cfg.horizon = 200;
    cfg.node_additions = {0, 2};
    cfg.mean_duration = 50;
    return cfg;
}

EventTrace tiny_trace() {
    // One roomy RT node, one job that fits, then its termination.
    EventTrace trace;
    trace.seed = 0;
    trace.config = small_config();
    trace.initial_nodes.push_back(
        WorkerNode{.id = 0, .capacity = {1000, 1000, 1000}, .alpha = 0.45, .beta = 0.45, .rt = true});

    Job job{.id = 0,
            .request = {200, 200, 200},
            .limit = {300, 300, 300},
            .criticality = Criticality::Low,
            .rt = false,
            .arrival_time = 5,
            .duration = 10};
    Event arrival{.time = 5, .sequence = 0, .kind = EventKind::JobArrival, .job = job};
    Event end{.time = 15, .sequence = 1, .kind = EventKind::JobEnd, .job_id = 0};
    trace.events = {arrival, end};
    return trace;
}

}  // namespace

TEST_CASE("generate_trace determinism and published ranges") {
    GeneratorConfig cfg;  // defaults, including the 4..10 / 300..1000 ranges
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        EventTrace a = generate_trace(cfg, seed);
        EventTrace b = generate_trace(cfg, seed);
        CHECK(serialize_trace(a) == serialize_trace(b));

        CHECK(a.initial_nodes.size() >= 4);
        CHECK(a.initial_nodes.size() <= 10);
        std::size_t arrivals = 0;
        for (const auto& ev : a.events)
            if (ev.kind == EventKind::JobArrival) {
                ++arrivals;
                CHECK(ev.job.valid());
                CHECK(ev.job.request.fits_within(ev.job.limit));
                CHECK(ev.job.duration >= 1);
            }
        CHECK(arrivals >= 300);
        CHECK(arrivals <= 1000);
    }
}

TEST_CASE("generated events are ordered with ends after arrivals") {
    EventTrace trace = generate_trace(small_config(), 7);
    std::int64_t prev = 0;
    std::map<std::int64_t, std::int64_t> arrival_seq;
    for (const auto& ev : trace.events) {
        CHECK(ev.time >= prev);
        prev = ev.time;
        if (ev.kind == EventKind::JobArrival) arrival_seq[ev.job.id] = ev.sequence;
        if (ev.kind == EventKind::JobEnd) {
            REQUIRE(arrival_seq.count(ev.job_id));
            CHECK(ev.sequence > arrival_seq[ev.job_id]);
        }
    }
}

TEST_CASE("config validation") {
    GeneratorConfig bad = small_config();
    bad.initial_nodes = {5, 3};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    GeneratorConfig probs = small_config();
    probs.crit_prob_no = 0.9;  // no longer sums to 1
    CHECK_THROWS_AS(probs.validate(), std::invalid_argument);
}

TEST_CASE("run on the tiny trace") {
    SchedulerConfig cfg = default_scheduler_config();
    EventTrace trace = tiny_trace();
    MetricsSeries series = run(trace, Policy::K4s, cfg);

    REQUIRE(series.samples.size() == 3);  // init + 2 events
    CHECK(series.samples[0].event == "init");
    CHECK(series.samples[0].objective.acceptance == 1.0);
    CHECK(series.samples[0].objective.residual == 1.0);

    CHECK(series.samples[1].event == "job_arrival");
    CHECK(series.samples[1].objective.acceptance == 1.0);
    CHECK(series.samples[1].assigned == 1);

    CHECK(series.samples[2].event == "job_end");
    CHECK(series.samples[2].objective.residual ==
          series.samples[0].objective.residual);
    CHECK(series.samples[2].assigned == 0);
}

TEST_CASE("empty trace yields the single implicit sample") {
    EventTrace trace = tiny_trace();
    trace.events.clear();
    MetricsSeries series = run(trace, Policy::K4s, default_scheduler_config());
    REQUIRE(series.samples.size() == 1);
    CHECK(series.samples[0].objective.acceptance == 1.0);
    CHECK(series.samples[0].objective.residual == 1.0);
}

TEST_CASE("replay determinism and cross-policy event timelines") {
    EventTrace trace = generate_trace(small_config(), 21);
    SchedulerConfig cfg = default_scheduler_config();

    MetricsSeries first = run(trace, Policy::K4s, cfg);
    MetricsSeries second = run(trace, Policy::K4s, cfg);
    CHECK(export_metrics(first, "k4s") == export_metrics(second, "k4s"));

    for (auto policy : {Policy::LeastAllocated, Policy::MostAllocated,
                        Policy::RequestedToCapacityRatio}) {
        MetricsSeries other = run(trace, policy, cfg);
        REQUIRE(other.samples.size() == first.samples.size());
        for (std::size_t i = 0; i < other.samples.size(); ++i) {
            CHECK(other.samples[i].time == first.samples[i].time);
            CHECK(other.samples[i].event == first.samples[i].event);
        }
    }
}

TEST_CASE("conservation and safety hold after every event") {
    EventTrace trace = generate_trace(small_config(), 33);
    SchedulerConfig cfg = default_scheduler_config();
    std::int64_t total_jobs = 0;
    for (const auto& ev : trace.events)
        if (ev.kind == EventKind::JobArrival) ++total_jobs;

    RunOptions opts;
    std::int64_t seen = 0;
    opts.after_event = [&](const ClusterState& state) {
        testing::require_safety(state, cfg);
        seen = static_cast<std::int64_t>(state.assigned.size() + state.pending.size() +
                                         state.finished.size());
        CHECK(seen == static_cast<std::int64_t>(state.jobs_catalog.size()));
    };
    run(trace, Policy::K4s, cfg, opts);
    CHECK(seen == total_jobs);
}

TEST_CASE("malformed traces are rejected with the offending event") {
    SchedulerConfig cfg = default_scheduler_config();

    SUBCASE("termination of an unknown job") {
        EventTrace trace = tiny_trace();
        trace.events[1].job_id = 42;
        try {
            run(trace, Policy::K4s, cfg);
            FAIL("expected a trace error");
        } catch (const TraceError& e) {
            CHECK(std::string(e.what()).find("event 1") != std::string::npos);
        }
    }
    SUBCASE("duplicate node id") {
        EventTrace trace = tiny_trace();
        Event dup{.time = 20, .sequence = 2, .kind = EventKind::NodeAdd,
                  .node = trace.initial_nodes[0]};
        trace.events.push_back(dup);
        CHECK_THROWS_AS(run(trace, Policy::K4s, cfg), TraceError);
    }
}

TEST_CASE("time_averaged weights samples by their holding interval") {
    MetricsSeries series;
    MetricsSample a;
    a.time = 0;
    a.objective.acceptance = 1.0;
    MetricsSample b;
    b.time = 3;
    b.objective.acceptance = 0.0;
    series.samples = {a, b};
    // a holds for 3 ticks, b for the final tick.
    CHECK(time_averaged(series).acceptance == doctest::Approx(0.75));
}
