#include "mcsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace mcsched {

const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::NodeAdd: return "node_add";
    case EventKind::JobArrival: return "job_arrival";
    case EventKind::JobEnd: return "job_end";
    }
    return "?";
}

namespace {

// All draws go through these helpers so the byte layout of a trace depends
// only on (config, seed), not on the standard library's distribution code.
std::int64_t draw_int(std::mt19937_64& rng, const IntRange& r) {
    return r.lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(r.hi - r.lo + 1));
}

double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

double draw_real(std::mt19937_64& rng, const RealRange& r) {
    return r.lo + (r.hi - r.lo) * draw_unit(rng);
}

std::int64_t draw_geometric(std::mt19937_64& rng, std::int64_t mean) {
    if (mean <= 1) return 1;
    double p = 1.0 / static_cast<double>(mean);
    double u = draw_unit(rng);
    double d = 1.0 + std::floor(std::log1p(-u) / std::log1p(-p));
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(d));
}

// Draw order per node: capacity cpu/memory/disk, rt, alpha, beta.
WorkerNode draw_node(std::mt19937_64& rng, const GeneratorConfig& cfg, std::int64_t id) {
    WorkerNode node;
    node.id = id;
    node.capacity.cpu = draw_int(rng, cfg.capacity_range);
    node.capacity.memory = draw_int(rng, cfg.capacity_range);
    node.capacity.disk = draw_int(rng, cfg.capacity_range);
    node.rt = draw_unit(rng) < cfg.rt_node_prob;
    const RealRange& ab = node.rt ? cfg.alpha_beta_rt : cfg.alpha_beta_nonrt;
    node.alpha = draw_real(rng, ab);
    node.beta = draw_real(rng, ab);
    return node;
}

void check_range(const IntRange& r, std::int64_t min_lo, const char* name) {
    if (r.lo > r.hi || r.lo < min_lo)
        throw std::invalid_argument(std::string("invalid range for ") + name);
}

void check_prob(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string("probability out of [0,1]: ") + name);
}

int kind_rank(EventKind k) {
    // Same-tick order: node additions first, then terminations freeing
    // resources, then arrivals.
    switch (k) {
    case EventKind::NodeAdd: return 0;
    case EventKind::JobEnd: return 1;
    case EventKind::JobArrival: return 2;
    }
    return 3;
}

std::int64_t payload_id(const Event& e) {
    switch (e.kind) {
    case EventKind::NodeAdd: return e.node.id;
    case EventKind::JobArrival: return e.job.id;
    case EventKind::JobEnd: return e.job_id;
    }
    return 0;
}

}  // namespace

void GeneratorConfig::validate() const {
    check_range(initial_nodes, 0, "initial_nodes");
    check_range(job_count, 0, "job_count");
    check_range(node_additions, 0, "node_additions");
    check_range(request_range, 1, "request_range");
    check_range(capacity_range, 1, "capacity_range");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (mean_duration < 1) throw std::invalid_argument("mean_duration must be >= 1");
    if (limit_scale.lo < 1.0 || limit_scale.lo > limit_scale.hi)
        throw std::invalid_argument("limit_scale must satisfy 1 <= lo <= hi");
    check_prob(crit_prob_no, "crit_prob_no");
    check_prob(crit_prob_low, "crit_prob_low");
    check_prob(crit_prob_high, "crit_prob_high");
    if (std::abs(crit_prob_no + crit_prob_low + crit_prob_high - 1.0) > 1e-9)
        throw std::invalid_argument("criticality probabilities must sum to 1");
    check_prob(rt_prob_no, "rt_prob_no");
    check_prob(rt_prob_low, "rt_prob_low");
    check_prob(rt_prob_high, "rt_prob_high");
    check_prob(rt_node_prob, "rt_node_prob");
    for (const RealRange* r : {&alpha_beta_rt, &alpha_beta_nonrt})
        if (r->lo < 0.0 || r->hi > 0.5 || r->lo > r->hi)
            throw std::invalid_argument("alpha/beta ranges must lie within [0, 0.5]");
}

EventTrace generate_trace(const GeneratorConfig& config, std::uint64_t seed) {
    config.validate();
    std::mt19937_64 rng(seed);

    EventTrace trace;
    trace.seed = seed;
    trace.config = config;

    // Draw order: counts, initial nodes, added nodes (time then fields),
    // jobs (arrival, duration, request dims, limit scale, criticality, rt).
    std::int64_t n_init = draw_int(rng, config.initial_nodes);
    std::int64_t n_jobs = draw_int(rng, config.job_count);
    std::int64_t n_adds = draw_int(rng, config.node_additions);

    std::int64_t next_node_id = 0;
    for (std::int64_t i = 0; i < n_init; ++i)
        trace.initial_nodes.push_back(draw_node(rng, config, next_node_id++));

    for (std::int64_t i = 0; i < n_adds; ++i) {
        Event ev;
        ev.kind = EventKind::NodeAdd;
        ev.time = draw_int(rng, {0, config.horizon - 1});
        ev.node = draw_node(rng, config, next_node_id++);
        trace.events.push_back(ev);
    }

    for (std::int64_t j = 0; j < n_jobs; ++j) {
        Job job;
        job.id = j;
        job.arrival_time = draw_int(rng, {0, config.horizon - 1});
        job.duration = draw_geometric(rng, config.mean_duration);
        job.request.cpu = draw_int(rng, config.request_range);
        job.request.memory = draw_int(rng, config.request_range);
        job.request.disk = draw_int(rng, config.request_range);
        double scale = draw_real(rng, config.limit_scale);
        for (int z = 0; z < ResourceVector::kDims; ++z)
            job.limit[z] = static_cast<std::int64_t>(
                std::ceil(static_cast<double>(job.request[z]) * scale));
        double c = draw_unit(rng);
        job.criticality = c < config.crit_prob_no ? Criticality::No
                        : c < config.crit_prob_no + config.crit_prob_low ? Criticality::Low
                                                                         : Criticality::High;
        double rt_prob = job.criticality == Criticality::No    ? config.rt_prob_no
                         : job.criticality == Criticality::Low ? config.rt_prob_low
                                                               : config.rt_prob_high;
        job.rt = draw_unit(rng) < rt_prob;
        assert(job.valid());

        Event arrival;
        arrival.kind = EventKind::JobArrival;
        arrival.time = job.arrival_time;
        arrival.job = job;
        trace.events.push_back(arrival);

        Event end;
        end.kind = EventKind::JobEnd;
        end.time = job.arrival_time + job.duration;
        end.job_id = job.id;
        trace.events.push_back(end);
    }

    std::sort(trace.events.begin(), trace.events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (kind_rank(a.kind) != kind_rank(b.kind)) return kind_rank(a.kind) < kind_rank(b.kind);
        return payload_id(a) < payload_id(b);
    });
    for (std::size_t i = 0; i < trace.events.size(); ++i)
        trace.events[i].sequence = static_cast<std::int64_t>(i);
    return trace;
}

MetricsSeries run(const EventTrace& trace, Policy policy, const SchedulerConfig& cfg,
                  const RunOptions& options) {
    ClusterState state;
    std::set<std::int64_t> node_ids;
    for (const auto& node : trace.initial_nodes) {
        if (!node_ids.insert(node.id).second)
            throw TraceError("duplicate node id " + std::to_string(node.id) + " in initial nodes");
        WorkerNode fresh = node;
        fresh.jobs.clear();
        state.nodes.push_back(std::move(fresh));
    }

    MetricsSeries series;
    std::int64_t total_moves = 0;
    auto sample = [&](std::int64_t t, std::int64_t seq, const char* kind) {
        MetricsSample s;
        s.time = t;
        s.sequence = seq;
        s.event = kind;
        s.objective = objective(state, cfg.weights, cfg.gamma, cfg.assurance_scope);
        s.assigned = static_cast<std::int64_t>(state.assigned_count());
        s.pending = static_cast<std::int64_t>(state.pending.size());
        s.nodes = static_cast<std::int64_t>(state.nodes.size());
        s.rebalance_moves = total_moves;
        series.samples.push_back(std::move(s));
    };
    sample(0, -1, "init");

    std::set<std::int64_t> ended;
    std::int64_t prev_time = 0;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const Event& ev = trace.events[i];
        auto bad = [&](const std::string& why) {
            throw TraceError("event " + std::to_string(i) + ": " + why);
        };
        if (ev.time < prev_time) bad("time goes backwards");
        prev_time = ev.time;
        state.clock = ev.time;

        bool rebalance_now = false;
        switch (ev.kind) {
        case EventKind::NodeAdd: {
            if (!node_ids.insert(ev.node.id).second)
                bad("duplicate node id " + std::to_string(ev.node.id));
            WorkerNode fresh = ev.node;
            fresh.jobs.clear();
            state.nodes.push_back(std::move(fresh));
            retry_pending(state, policy, cfg);
            rebalance_now = options.rebalance_on == RebalanceTrigger::NodeAdd;
            break;
        }
        case EventKind::JobArrival: {
            if (!ev.job.valid()) bad("invalid job " + std::to_string(ev.job.id));
            if (state.jobs_catalog.count(ev.job.id))
                bad("duplicate job id " + std::to_string(ev.job.id));
            state.jobs_catalog.emplace(ev.job.id, ev.job);
            state.pending.push_back(ev.job.id);
            schedule(state, ev.job.id, policy, cfg);
            break;
        }
        case EventKind::JobEnd: {
            if (!state.jobs_catalog.count(ev.job_id))
                bad("termination of unknown job " + std::to_string(ev.job_id));
            if (!ended.insert(ev.job_id).second)
                bad("job " + std::to_string(ev.job_id) + " terminated twice");
            auto it = state.assigned.find(ev.job_id);
            if (it != state.assigned.end()) {
                state.find_node(it->second)->remove_job(ev.job_id);
                state.assigned.erase(it);
            } else if (state.is_pending(ev.job_id)) {
                // Lifetime elapsed unserved; the job leaves the live set.
                state.remove_pending(ev.job_id);
            } else {
                bad("job " + std::to_string(ev.job_id) + " neither assigned nor pending");
            }
            state.finished.push_back(ev.job_id);
            retry_pending(state, policy, cfg);
            break;
        }
        }

        if (options.rebalance_on == RebalanceTrigger::EveryEvent) rebalance_now = true;
        if (rebalance_now && policy == Policy::K4s)
            total_moves += static_cast<std::int64_t>(
                rebalance(state, cfg, options.max_rebalance_moves).size());

        if (options.after_event) options.after_event(state);
        sample(ev.time, ev.sequence, to_string(ev.kind));
    }
    return series;
}

ObjectiveBreakdown time_averaged(const MetricsSeries& series) {
    ObjectiveBreakdown avg;
    if (series.samples.empty()) return avg;
    double total = 0.0;
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        const auto& s = series.samples[i];
        double w = (i + 1 < series.samples.size())
                       ? static_cast<double>(series.samples[i + 1].time - s.time)
                       : 1.0;
        avg.acceptance += w * s.objective.acceptance;
        avg.assurance += w * s.objective.assurance;
        avg.residual += w * s.objective.residual;
        avg.weighted_sum += w * s.objective.weighted_sum;
        avg.score += w * s.objective.score;
        total += w;
    }
    avg.acceptance /= total;
    avg.assurance /= total;
    avg.residual /= total;
    avg.weighted_sum /= total;
    avg.score /= total;
    return avg;
}

}  // namespace mcsched
