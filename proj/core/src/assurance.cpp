#include "mcsched/assurance.hpp"

namespace mcsched {

namespace {

// Tier predicate at criticality c: jobs of criticality >= c counted at limit,
// the rest at request, must fit the capacity in every dimension.
template <typename JobRange>
bool tier_holds_at(const ResourceVector& capacity, const JobRange& jobs, Criticality c) {
    ResourceVector demand;
    for (const Job* j : jobs) demand += (j->criticality >= c) ? j->limit : j->request;
    return demand.fits_within(capacity);
}

template <typename JobRange>
GuaranteeTier tier_of(const ResourceVector& capacity, const JobRange& jobs) {
    if (tier_holds_at(capacity, jobs, Criticality::No)) return GuaranteeTier::AllLimits;
    if (tier_holds_at(capacity, jobs, Criticality::Low)) return GuaranteeTier::LowLimits;
    if (tier_holds_at(capacity, jobs, Criticality::High)) return GuaranteeTier::HighLimits;
    return GuaranteeTier::RequestsOnly;
}

std::vector<const Job*> hosted_jobs(const WorkerNode& node, const JobCatalog& catalog) {
    std::vector<const Job*> out;
    out.reserve(node.jobs.size());
    for (std::int64_t id : node.jobs) out.push_back(&catalog.at(id));
    return out;
}

}  // namespace

GuaranteeTier guaranteed_tier(const WorkerNode& node, const JobCatalog& catalog) {
    return tier_of(node.capacity, hosted_jobs(node, catalog));
}

GuaranteeTier guaranteed_tier_with(const WorkerNode& node, const JobCatalog& catalog,
                                   const Job& extra) {
    auto jobs = hosted_jobs(node, catalog);
    jobs.push_back(&extra);
    return tier_of(node.capacity, jobs);
}

double node_assurance(const WorkerNode& node, const JobCatalog& catalog,
                      const GammaTable& gamma) {
    return (node.alpha + node.beta) * gamma.at(guaranteed_tier(node, catalog));
}

double assurance_if_assigned(const WorkerNode& node, const Job& job,
                             const JobCatalog& catalog, const GammaTable& gamma) {
    return (node.alpha + node.beta) * gamma.at(guaranteed_tier_with(node, catalog, job));
}

}  // namespace mcsched
