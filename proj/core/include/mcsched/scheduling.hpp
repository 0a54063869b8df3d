#pragma once

#include <optional>

#include "mcsched/objectives.hpp"

namespace mcsched {

enum class Policy { K4s, LeastAllocated, MostAllocated, RequestedToCapacityRatio };

const char* to_string(Policy p);
std::optional<Policy> parse_policy(const std::string& name);

/// Piecewise-linear non-decreasing map on [0,1], given as (x, y) knots.
/// Default is the identity.
struct ShapeFunction {
    std::vector<std::pair<double, double>> points{{0.0, 0.0}, {1.0, 1.0}};

    void validate() const;
    double operator()(double u) const;
};

/// Everything the eligibility filter and the scorers need besides the state.
struct SchedulerConfig {
    Weights weights;
    Thresholds thresholds;
    GammaTable gamma;
    AssuranceScope assurance_scope = AssuranceScope::RtOnly;
    ShapeFunction shape;
};

struct PlacementDecision {
    std::int64_t job_id = 0;
    bool placed = false;
    std::int64_t node_id = -1;          // valid when placed
    ObjectiveBreakdown objective;        // what-if score for K4.0s, else components of chosen state
    double baseline_score = 0.0;         // scorer value for baseline policies
};

struct RebalanceMove {
    std::int64_t job_id = 0;
    std::int64_t source_node_id = -1;
    std::int64_t destination_node_id = -1;
    double of_before = 0.0;
    double of_after = 0.0;
};

/// Shared eligibility filter: resource fit at request, assurance compliance
/// (A* at or above every hosted job's threshold plus the candidate's), and
/// real-time compliance.
bool eligible(const ClusterState& state, const WorkerNode& node, const Job& job,
              const SchedulerConfig& cfg);

/// Greedy what-if placement: scores every eligible node by the objective of
/// the hypothetical state and compares the best against leaving the job
/// pending. Ties go to the lowest node id. Mutates the state only on Placed.
PlacementDecision schedule_k4s(ClusterState& state, std::int64_t job_id,
                               const SchedulerConfig& cfg,
                               std::int64_t exclude_node_id = -1);

double score_least_allocated(const WorkerNode& node, const Job& job, const JobCatalog& catalog);
double score_most_allocated(const WorkerNode& node, const Job& job, const JobCatalog& catalog);
double score_requested_to_capacity_ratio(const WorkerNode& node, const Job& job,
                                         const JobCatalog& catalog, const ShapeFunction& shape);

/// Places the job on the eligible node with the best baseline score
/// (tie-break lowest node id); baselines never voluntarily leave a placeable
/// job pending.
PlacementDecision schedule_baseline(ClusterState& state, std::int64_t job_id, Policy policy,
                                    const SchedulerConfig& cfg);

PlacementDecision schedule(ClusterState& state, std::int64_t job_id, Policy policy,
                           const SchedulerConfig& cfg);

/// Hill-climbing rescheduler: repeatedly picks the (node, job) removal with
/// the best objective, re-places the job elsewhere via the greedy scheduler,
/// and commits only strict improvements. Stops at the first non-improving
/// step or after max_moves.
std::vector<RebalanceMove> rebalance(ClusterState& state, const SchedulerConfig& cfg,
                                     int max_moves);

/// Re-attempts every pending job in arrival order with the active policy.
std::vector<PlacementDecision> retry_pending(ClusterState& state, Policy policy,
                                             const SchedulerConfig& cfg);

}  // namespace mcsched
