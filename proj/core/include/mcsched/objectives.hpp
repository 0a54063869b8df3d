#pragma once

#include "mcsched/assurance.hpp"
#include "mcsched/model.hpp"

namespace mcsched {

/// Scalarization weights for the three objective components. Accepted
/// unnormalized (e.g. 52.5/42.5/5) and divided by their sum.
struct Weights {
    double acceptance = 52.5;
    double assurance = 42.5;
    double residual = 5.0;

    Weights normalized() const {
        double sum = acceptance + assurance + residual;
        if (!(sum > 0.0) || acceptance < 0 || assurance < 0 || residual < 0)
            throw std::invalid_argument("weights must be non-negative with a positive sum");
        return {acceptance / sum, assurance / sum, residual / sum};
    }
};

/// Which nodes the average-assurance term ranges over.
enum class AssuranceScope { RtOnly, All };

struct ObjectiveBreakdown {
    double acceptance = 0.0;
    double assurance = 0.0;
    double residual = 0.0;
    double weighted_sum = 0.0;
    double score = 0.0;  // acceptance * weighted_sum
};

double acceptance_rate(const ClusterState& state);
double avg_assurance(const ClusterState& state, const GammaTable& gamma,
                     AssuranceScope scope = AssuranceScope::RtOnly);
double residual_capacity(const ClusterState& state);

ObjectiveBreakdown objective(const ClusterState& state, const Weights& weights,
                             const GammaTable& gamma,
                             AssuranceScope scope = AssuranceScope::RtOnly);

/// Caches per-node assurance and residual terms of a state so what-if scores
/// for single placements or removals cost only the touched node. Substituted
/// sums run in the same node order as objective(), so hypothetical scores
/// match a fresh evaluation of the mutated state bit for bit.
class ObjectiveEvaluator {
public:
    ObjectiveEvaluator(const ClusterState& state, const Weights& weights,
                       const GammaTable& gamma, AssuranceScope scope);

    ObjectiveBreakdown current() const;
    /// Score with a pending job placed on nodes[node_idx].
    ObjectiveBreakdown with_job_on(std::size_t node_idx, const Job& job) const;
    /// Score with `job` removed from nodes[node_idx] back to pending.
    ObjectiveBreakdown with_job_removed(std::size_t node_idx, const Job& job) const;

private:
    ObjectiveBreakdown combine(std::size_t substituted_idx, double node_assurance,
                               double node_residual, std::int64_t assigned_delta) const;

    const ClusterState& state_;
    Weights weights_;
    const GammaTable& gamma_;
    AssuranceScope scope_;
    bool rt_scope_active_;             // some node is RT, so the mean is RT-only
    std::vector<double> assurances_;   // per node
    std::vector<double> residuals_;    // per node, sum free_lim^2 / sum cap^2
};

}  // namespace mcsched
