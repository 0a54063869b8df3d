#include "mcsched/objectives.hpp"

namespace mcsched {

namespace {

double node_residual_term(const WorkerNode& node, const JobCatalog& catalog,
                          const Job* extra) {
    ResourceVector limits;
    for (std::int64_t id : node.jobs) limits += catalog.at(id).limit;
    if (extra != nullptr) limits += extra->limit;
    ResourceVector free = saturating_sub(node.capacity, limits);

    double num = 0.0, den = 0.0;
    for (int z = 0; z < ResourceVector::kDims; ++z) {
        num += static_cast<double>(free[z]) * static_cast<double>(free[z]);
        den += static_cast<double>(node.capacity[z]) * static_cast<double>(node.capacity[z]);
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace

double acceptance_rate(const ClusterState& state) {
    std::size_t m = state.live_jobs();
    if (m == 0) return 1.0;  // an idle scheduler has rejected nothing
    return static_cast<double>(state.assigned_count()) / static_cast<double>(m);
}

double avg_assurance(const ClusterState& state, const GammaTable& gamma,
                     AssuranceScope scope) {
    if (state.nodes.empty()) return 0.0;
    bool rt_only = false;
    if (scope == AssuranceScope::RtOnly) {
        for (const auto& n : state.nodes)
            if (n.rt) { rt_only = true; break; }
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& n : state.nodes) {
        if (rt_only && !n.rt) continue;
        sum += node_assurance(n, state.jobs_catalog, gamma);
        ++count;
    }
    return sum / static_cast<double>(count);
}

double residual_capacity(const ClusterState& state) {
    if (state.nodes.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& n : state.nodes)
        sum += node_residual_term(n, state.jobs_catalog, nullptr);
    return sum / static_cast<double>(state.nodes.size());
}

ObjectiveBreakdown objective(const ClusterState& state, const Weights& weights,
                             const GammaTable& gamma, AssuranceScope scope) {
    return ObjectiveEvaluator(state, weights, gamma, scope).current();
}

ObjectiveEvaluator::ObjectiveEvaluator(const ClusterState& state, const Weights& weights,
                                       const GammaTable& gamma, AssuranceScope scope)
    : state_(state), weights_(weights.normalized()), gamma_(gamma), scope_(scope) {
    rt_scope_active_ = false;
    if (scope_ == AssuranceScope::RtOnly) {
        for (const auto& n : state_.nodes)
            if (n.rt) { rt_scope_active_ = true; break; }
    }
    assurances_.reserve(state_.nodes.size());
    residuals_.reserve(state_.nodes.size());
    for (const auto& n : state_.nodes) {
        assurances_.push_back(node_assurance(n, state_.jobs_catalog, gamma_));
        residuals_.push_back(node_residual_term(n, state_.jobs_catalog, nullptr));
    }
}

ObjectiveBreakdown ObjectiveEvaluator::combine(std::size_t substituted_idx,
                                               double node_assurance,
                                               double node_residual,
                                               std::int64_t assigned_delta) const {
    ObjectiveBreakdown out;

    std::size_t m = state_.live_jobs();
    std::int64_t assigned = static_cast<std::int64_t>(state_.assigned_count()) + assigned_delta;
    out.acceptance = (m == 0) ? 1.0
                              : static_cast<double>(assigned) / static_cast<double>(m);

    if (!state_.nodes.empty()) {
        double a_sum = 0.0, r_sum = 0.0;
        std::size_t a_count = 0;
        for (std::size_t i = 0; i < state_.nodes.size(); ++i) {
            bool sub = (i == substituted_idx);
            if (!rt_scope_active_ || state_.nodes[i].rt) {
                a_sum += sub ? node_assurance : assurances_[i];
                ++a_count;
            }
            r_sum += sub ? node_residual : residuals_[i];
        }
        out.assurance = a_sum / static_cast<double>(a_count);
        out.residual = r_sum / static_cast<double>(state_.nodes.size());
    }

    out.weighted_sum = weights_.acceptance * out.acceptance +
                       weights_.assurance * out.assurance +
                       weights_.residual * out.residual;
    out.score = out.acceptance * out.weighted_sum;
    return out;
}

ObjectiveBreakdown ObjectiveEvaluator::current() const {
    return combine(state_.nodes.size(), 0.0, 0.0, 0);
}

ObjectiveBreakdown ObjectiveEvaluator::with_job_on(std::size_t node_idx, const Job& job) const {
    const WorkerNode& node = state_.nodes[node_idx];
    double a = assurance_if_assigned(node, job, state_.jobs_catalog, gamma_);
    double r = node_residual_term(node, state_.jobs_catalog, &job);
    return combine(node_idx, a, r, +1);
}

ObjectiveBreakdown ObjectiveEvaluator::with_job_removed(std::size_t node_idx,
                                                        const Job& job) const {
    WorkerNode stripped = state_.nodes[node_idx];
    stripped.remove_job(job.id);
    double a = node_assurance(stripped, state_.jobs_catalog, gamma_);
    double r = node_residual_term(stripped, state_.jobs_catalog, nullptr);
    return combine(node_idx, a, r, -1);
}

}  // namespace mcsched
