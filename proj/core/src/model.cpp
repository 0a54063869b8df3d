#include "mcsched/model.hpp"

#include <algorithm>

namespace mcsched {

void WorkerNode::add_job(std::int64_t job_id) {
    auto it = std::lower_bound(jobs.begin(), jobs.end(), job_id);
    assert(it == jobs.end() || *it != job_id);
    jobs.insert(it, job_id);
}

void WorkerNode::remove_job(std::int64_t job_id) {
    auto it = std::lower_bound(jobs.begin(), jobs.end(), job_id);
    assert(it != jobs.end() && *it == job_id);
    jobs.erase(it);
}

bool WorkerNode::hosts(std::int64_t job_id) const {
    return std::binary_search(jobs.begin(), jobs.end(), job_id);
}

const WorkerNode* ClusterState::find_node(std::int64_t node_id) const {
    for (const auto& n : nodes)
        if (n.id == node_id) return &n;
    return nullptr;
}

WorkerNode* ClusterState::find_node(std::int64_t node_id) {
    for (auto& n : nodes)
        if (n.id == node_id) return &n;
    return nullptr;
}

const Job& ClusterState::job(std::int64_t job_id) const {
    auto it = jobs_catalog.find(job_id);
    if (it == jobs_catalog.end())
        throw std::out_of_range("unknown job id " + std::to_string(job_id));
    return it->second;
}

bool ClusterState::is_pending(std::int64_t job_id) const {
    return std::find(pending.begin(), pending.end(), job_id) != pending.end();
}

void ClusterState::remove_pending(std::int64_t job_id) {
    auto it = std::find(pending.begin(), pending.end(), job_id);
    assert(it != pending.end());
    pending.erase(it);
}

void ClusterState::place(std::int64_t job_id, std::int64_t node_id) {
    remove_pending(job_id);
    assigned[job_id] = node_id;
    WorkerNode* node = find_node(node_id);
    assert(node != nullptr);
    node->add_job(job_id);
}

void ClusterState::unplace(std::int64_t job_id) {
    auto it = assigned.find(job_id);
    assert(it != assigned.end());
    WorkerNode* node = find_node(it->second);
    assert(node != nullptr);
    node->remove_job(job_id);
    assigned.erase(it);
    // Re-insert by arrival order (ties by id) so retry order stays stable.
    const Job& j = job(job_id);
    auto pos = std::find_if(pending.begin(), pending.end(), [&](std::int64_t other) {
        const Job& o = job(other);
        return o.arrival_time > j.arrival_time ||
               (o.arrival_time == j.arrival_time && o.id > j.id);
    });
    pending.insert(pos, job_id);
}

ResourceVector free_at_request(const WorkerNode& node, const JobCatalog& catalog) {
    ResourceVector used;
    for (std::int64_t id : node.jobs) used += catalog.at(id).request;
    ResourceVector free = node.capacity - used;
    assert(free.non_negative() && "request-level fit violated");
    return free;
}

ResourceVector free_at_limit(const WorkerNode& node, const JobCatalog& catalog) {
    ResourceVector limits;
    for (std::int64_t id : node.jobs) limits += catalog.at(id).limit;
    // Limits may oversubscribe capacity; clamp so squared terms stay sane.
    return saturating_sub(node.capacity, limits);
}

void check_state_consistency(const ClusterState& state) {
    auto fail = [](const std::string& msg) { throw std::logic_error("state inconsistency: " + msg); };

    std::size_t hosted = 0;
    for (const auto& node : state.nodes) {
        ResourceVector used;
        for (std::int64_t id : node.jobs) {
            auto it = state.assigned.find(id);
            if (it == state.assigned.end() || it->second != node.id)
                fail("job " + std::to_string(id) + " on node " + std::to_string(node.id) +
                     " missing from assigned map");
            used += state.jobs_catalog.at(id).request;
        }
        if (!used.fits_within(node.capacity))
            fail("request sum exceeds capacity on node " + std::to_string(node.id));
        hosted += node.jobs.size();
    }
    if (hosted != state.assigned.size()) fail("assigned map size mismatch");

    for (std::int64_t id : state.pending) {
        if (state.assigned.count(id)) fail("job " + std::to_string(id) + " both pending and assigned");
        if (!state.jobs_catalog.count(id)) fail("pending job missing from catalog");
    }
    for (const auto& [job_id, node_id] : state.assigned) {
        const WorkerNode* node = state.find_node(node_id);
        if (node == nullptr || !node->hosts(job_id))
            fail("assigned map points to node not hosting job " + std::to_string(job_id));
    }
}

}  // namespace mcsched
