#pragma once

#include <functional>

#include "mcsched/scheduling.hpp"

namespace mcsched {

enum class EventKind { NodeAdd, JobArrival, JobEnd };

const char* to_string(EventKind k);

struct Event {
    std::int64_t time = 0;
    std::int64_t sequence = 0;  // total order among same-tick events
    EventKind kind = EventKind::JobArrival;
    // Payload, by kind: NodeAdd carries `node`, JobArrival carries `job`,
    // JobEnd carries `job_id`.
    WorkerNode node;
    Job job;
    std::int64_t job_id = -1;
};

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;  // inclusive
};

struct RealRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Workload generation knobs. The initial-node and job-count ranges are the
/// experiment's published setup; everything else is a documented default.
struct GeneratorConfig {
    IntRange initial_nodes{4, 10};
    IntRange job_count{300, 1000};
    std::int64_t horizon = 1000;
    IntRange node_additions{0, 5};
    std::int64_t mean_duration = 200;

    IntRange request_range{50, 500};      // per dimension, millicores/MiB
    RealRange limit_scale{1.0, 2.0};      // limit = ceil(request * scale)
    double crit_prob_no = 0.5;
    double crit_prob_low = 0.3;
    double crit_prob_high = 0.2;
    double rt_prob_no = 0.1;              // P(RT job | criticality)
    double rt_prob_low = 0.5;
    double rt_prob_high = 0.8;

    IntRange capacity_range{2000, 8000};  // per dimension
    double rt_node_prob = 0.5;
    RealRange alpha_beta_rt{0.35, 0.5};   // alpha and beta each, RT nodes
    RealRange alpha_beta_nonrt{0.2, 0.5};

    void validate() const;
};

/// A replayable experiment input: every policy consumes the same trace.
struct EventTrace {
    int version = 1;
    std::uint64_t seed = 0;
    GeneratorConfig config;  // echoed for provenance
    std::vector<WorkerNode> initial_nodes;
    std::vector<Event> events;
};

struct MetricsSample {
    std::int64_t time = 0;
    std::int64_t sequence = 0;      // -1 for the implicit initial sample
    std::string event = "init";
    ObjectiveBreakdown objective;
    std::int64_t assigned = 0;
    std::int64_t pending = 0;
    std::int64_t nodes = 0;
    std::int64_t rebalance_moves = 0;  // cumulative
};

struct MetricsSeries {
    std::vector<MetricsSample> samples;
};

struct TraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RebalanceTrigger { NodeAdd, EveryEvent, Never };

struct RunOptions {
    RebalanceTrigger rebalance_on = RebalanceTrigger::NodeAdd;
    int max_rebalance_moves = 100;
    /// Test hook invoked after every processed event.
    std::function<void(const ClusterState&)> after_event;
};

/// Draws a trace from the configured distributions. Identical (config, seed)
/// pairs yield identical traces; the PRNG is a fixed mt19937_64 with the
/// draw order documented in the implementation.
EventTrace generate_trace(const GeneratorConfig& config, std::uint64_t seed);

/// Replays a trace under one policy, recording one metrics sample per event
/// (plus the initial state). Pure in its arguments.
MetricsSeries run(const EventTrace& trace, Policy policy, const SchedulerConfig& cfg,
                  const RunOptions& options = {});

/// Time-weighted mean of each objective component over the series: a sample
/// holds from its event time to the next sample's (the last one for one tick).
ObjectiveBreakdown time_averaged(const MetricsSeries& series);

}  // namespace mcsched
