#include "mcsched/scheduling.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

namespace mcsched {

namespace {

constexpr double kRebalanceEpsilon = 1e-12;

// Node indices in ascending id order, the tie-break order of every argmax.
std::vector<std::size_t> indices_by_id(const ClusterState& state) {
    std::vector<std::size_t> idx(state.nodes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return state.nodes[a].id < state.nodes[b].id;
    });
    return idx;
}

double mean_utilization_after(const WorkerNode& node, const Job& job,
                              const JobCatalog& catalog, const ShapeFunction* shape) {
    ResourceVector requested;
    for (std::int64_t id : node.jobs) requested += catalog.at(id).request;
    requested += job.request;

    double sum = 0.0;
    for (int z = 0; z < ResourceVector::kDims; ++z) {
        double cap = static_cast<double>(node.capacity[z]);
        double u = cap > 0.0 ? static_cast<double>(requested[z]) / cap : 1.0;
        sum += shape ? (*shape)(u) : u;
    }
    return sum / ResourceVector::kDims;
}

}  // namespace

const char* to_string(Policy p) {
    switch (p) {
    case Policy::K4s: return "k4s";
    case Policy::LeastAllocated: return "least_allocated";
    case Policy::MostAllocated: return "most_allocated";
    case Policy::RequestedToCapacityRatio: return "requested_to_capacity_ratio";
    }
    return "?";
}

std::optional<Policy> parse_policy(const std::string& name) {
    if (name == "k4s") return Policy::K4s;
    if (name == "least_allocated" || name == "least-allocated") return Policy::LeastAllocated;
    if (name == "most_allocated" || name == "most-allocated") return Policy::MostAllocated;
    if (name == "requested_to_capacity_ratio" || name == "requested-to-capacity-ratio")
        return Policy::RequestedToCapacityRatio;
    return std::nullopt;
}

void ShapeFunction::validate() const {
    if (points.size() < 2)
        throw std::invalid_argument("shape needs at least two points");
    if (points.front().first != 0.0 || points.back().first != 1.0)
        throw std::invalid_argument("shape must span [0,1] on the x axis");
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto [x, y] = points[i];
        if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
            throw std::invalid_argument("shape points must lie in [0,1] x [0,1]");
        if (i > 0 && (x <= points[i - 1].first || y < points[i - 1].second))
            throw std::invalid_argument("shape points must be non-decreasing");
    }
}

double ShapeFunction::operator()(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (u <= points[i].first) {
            auto [x0, y0] = points[i - 1];
            auto [x1, y1] = points[i];
            return y0 + (y1 - y0) * (u - x0) / (x1 - x0);
        }
    }
    return points.back().second;
}

bool eligible(const ClusterState& state, const WorkerNode& node, const Job& job,
              const SchedulerConfig& cfg) {
    if (job.rt && !node.rt) return false;
    if (!job.request.fits_within(free_at_request(node, state.jobs_catalog))) return false;

    // A* must clear the threshold of every job that would live on the node.
    Criticality worst = job.criticality;
    for (std::int64_t id : node.jobs)
        worst = std::max(worst, state.jobs_catalog.at(id).criticality);
    double hypothetical = assurance_if_assigned(node, job, state.jobs_catalog, cfg.gamma);
    return hypothetical >= threshold_of(worst, cfg.thresholds);
}

namespace {

// The evaluator must have been built against the current state.
PlacementDecision schedule_k4s_with(ClusterState& state, std::int64_t job_id,
                                    const SchedulerConfig& cfg, std::int64_t exclude_node_id,
                                    const ObjectiveEvaluator& eval) {
    const Job& job = state.job(job_id);
    ObjectiveBreakdown pending_score = eval.current();

    bool found = false;
    std::size_t best_idx = 0;
    ObjectiveBreakdown best;
    for (std::size_t idx : indices_by_id(state)) {
        const WorkerNode& node = state.nodes[idx];
        if (node.id == exclude_node_id) continue;
        if (!eligible(state, node, job, cfg)) continue;
        ObjectiveBreakdown what_if = eval.with_job_on(idx, job);
        if (!found || what_if.score > best.score) {
            found = true;
            best_idx = idx;
            best = what_if;
        }
    }

    PlacementDecision decision{.job_id = job_id};
    if (found && best.score >= pending_score.score) {
        decision.placed = true;
        decision.node_id = state.nodes[best_idx].id;
        decision.objective = best;
        state.place(job_id, decision.node_id);
    } else {
        decision.objective = pending_score;
    }
    return decision;
}

}  // namespace

PlacementDecision schedule_k4s(ClusterState& state, std::int64_t job_id,
                               const SchedulerConfig& cfg, std::int64_t exclude_node_id) {
    ObjectiveEvaluator eval(state, cfg.weights, cfg.gamma, cfg.assurance_scope);
    return schedule_k4s_with(state, job_id, cfg, exclude_node_id, eval);
}

double score_least_allocated(const WorkerNode& node, const Job& job, const JobCatalog& catalog) {
    return 1.0 - mean_utilization_after(node, job, catalog, nullptr);
}

double score_most_allocated(const WorkerNode& node, const Job& job, const JobCatalog& catalog) {
    return mean_utilization_after(node, job, catalog, nullptr);
}

double score_requested_to_capacity_ratio(const WorkerNode& node, const Job& job,
                                         const JobCatalog& catalog, const ShapeFunction& shape) {
    return mean_utilization_after(node, job, catalog, &shape);
}

PlacementDecision schedule_baseline(ClusterState& state, std::int64_t job_id, Policy policy,
                                    const SchedulerConfig& cfg) {
    assert(policy != Policy::K4s);
    const Job& job = state.job(job_id);

    bool found = false;
    std::size_t best_idx = 0;
    double best_score = 0.0;
    for (std::size_t idx : indices_by_id(state)) {
        const WorkerNode& node = state.nodes[idx];
        if (!eligible(state, node, job, cfg)) continue;
        double score = 0.0;
        switch (policy) {
        case Policy::LeastAllocated:
            score = score_least_allocated(node, job, state.jobs_catalog);
            break;
        case Policy::MostAllocated:
            score = score_most_allocated(node, job, state.jobs_catalog);
            break;
        case Policy::RequestedToCapacityRatio:
            score = score_requested_to_capacity_ratio(node, job, state.jobs_catalog, cfg.shape);
            break;
        case Policy::K4s:
            break;
        }
        if (!found || score > best_score) {
            found = true;
            best_idx = idx;
            best_score = score;
        }
    }

    PlacementDecision decision{.job_id = job_id};
    if (found) {
        decision.placed = true;
        decision.node_id = state.nodes[best_idx].id;
        decision.baseline_score = best_score;
        state.place(job_id, decision.node_id);
    }
    decision.objective = objective(state, cfg.weights, cfg.gamma, cfg.assurance_scope);
    return decision;
}

PlacementDecision schedule(ClusterState& state, std::int64_t job_id, Policy policy,
                           const SchedulerConfig& cfg) {
    return policy == Policy::K4s ? schedule_k4s(state, job_id, cfg)
                                 : schedule_baseline(state, job_id, policy, cfg);
}

std::vector<RebalanceMove> rebalance(ClusterState& state, const SchedulerConfig& cfg,
                                     int max_moves) {
    std::vector<RebalanceMove> moves;
    for (int iter = 0; iter < max_moves; ++iter) {
        ObjectiveEvaluator eval(state, cfg.weights, cfg.gamma, cfg.assurance_scope);
        double of_before = eval.current().score;

        // Phase 1: best (node, job) removal, ties by node id then job id.
        bool found = false;
        std::size_t src_idx = 0;
        std::int64_t victim = -1;
        double best_removal = 0.0;
        for (std::size_t idx : indices_by_id(state)) {
            for (std::int64_t id : state.nodes[idx].jobs) {
                double score = eval.with_job_removed(idx, state.job(id)).score;
                if (!found || score > best_removal) {
                    found = true;
                    src_idx = idx;
                    victim = id;
                    best_removal = score;
                }
            }
        }
        if (!found) break;

        // Phase 2: re-place anywhere but the source, commit on strict gain.
        std::int64_t source_id = state.nodes[src_idx].id;
        state.unplace(victim);
        PlacementDecision decision = schedule_k4s(state, victim, cfg, source_id);
        if (decision.placed && decision.objective.score > of_before + kRebalanceEpsilon) {
            moves.push_back({victim, source_id, decision.node_id, of_before,
                             decision.objective.score});
        } else {
            if (decision.placed) state.unplace(victim);
            state.place(victim, source_id);
            break;
        }
    }
    return moves;
}

std::vector<PlacementDecision> retry_pending(ClusterState& state, Policy policy,
                                             const SchedulerConfig& cfg) {
    std::vector<PlacementDecision> decisions;
    std::vector<std::int64_t> snapshot = state.pending;  // arrival order
    decisions.reserve(snapshot.size());
    if (policy == Policy::K4s) {
        // The state only changes on a successful placement, so one evaluator
        // serves every rejected attempt in between.
        auto eval = std::make_unique<ObjectiveEvaluator>(state, cfg.weights, cfg.gamma,
                                                         cfg.assurance_scope);
        for (std::int64_t id : snapshot) {
            decisions.push_back(schedule_k4s_with(state, id, cfg, -1, *eval));
            if (decisions.back().placed)
                eval = std::make_unique<ObjectiveEvaluator>(state, cfg.weights, cfg.gamma,
                                                            cfg.assurance_scope);
        }
    } else {
        for (std::int64_t id : snapshot)
            decisions.push_back(schedule_baseline(state, id, policy, cfg));
    }
    return decisions;
}

}  // namespace mcsched
