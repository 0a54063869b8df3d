#pragma once

#include <cassert>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcsched {

/// Fixed three-dimensional resource quantity: CPU millicores, memory MiB,
/// disk MiB. All components are non-negative integers so that sums over job
/// sets are exact.
struct ResourceVector {
    static constexpr int kDims = 3;

    std::int64_t cpu = 0;
    std::int64_t memory = 0;
    std::int64_t disk = 0;

    std::int64_t operator[](int z) const {
        switch (z) {
        case 0: return cpu;
        case 1: return memory;
        case 2: return disk;
        }
        assert(false && "resource dimension out of range");
        return 0;
    }

    std::int64_t& operator[](int z) {
        switch (z) {
        case 0: return cpu;
        case 1: return memory;
        default: assert(z == 2); return disk;
        }
    }

    ResourceVector& operator+=(const ResourceVector& o) {
        cpu += o.cpu;
        memory += o.memory;
        disk += o.disk;
        return *this;
    }

    friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) {
        a += b;
        return a;
    }

    /// Component-wise subtraction. The caller guarantees non-negativity;
    /// use saturating_sub where the difference may go below zero.
    friend ResourceVector operator-(const ResourceVector& a, const ResourceVector& b) {
        return {a.cpu - b.cpu, a.memory - b.memory, a.disk - b.disk};
    }

    bool operator==(const ResourceVector&) const = default;

    bool non_negative() const { return cpu >= 0 && memory >= 0 && disk >= 0; }

    /// true iff every component of *this is <= the matching component of o.
    bool fits_within(const ResourceVector& o) const {
        return cpu <= o.cpu && memory <= o.memory && disk <= o.disk;
    }

    bool any_positive() const { return cpu > 0 || memory > 0 || disk > 0; }
};

/// max(0, a - b) component-wise.
inline ResourceVector saturating_sub(const ResourceVector& a, const ResourceVector& b) {
    auto clamp = [](std::int64_t v) { return v < 0 ? std::int64_t{0} : v; };
    return {clamp(a.cpu - b.cpu), clamp(a.memory - b.memory), clamp(a.disk - b.disk)};
}

/// Job criticality, totally ordered No < Low < High.
enum class Criticality : int { No = 0, Low = 1, High = 2 };

inline const char* to_string(Criticality c) {
    switch (c) {
    case Criticality::No: return "NO";
    case Criticality::Low: return "LOW";
    case Criticality::High: return "HIGH";
    }
    return "?";
}

struct Job {
    std::int64_t id = 0;
    ResourceVector request;   // admission-guaranteed minimum
    ResourceVector limit;     // overload maximum, >= request component-wise
    Criticality criticality = Criticality::No;
    bool rt = false;
    std::int64_t arrival_time = 0;  // tick
    std::int64_t duration = 1;      // ticks, >= 1

    bool valid() const {
        return request.non_negative() && request.fits_within(limit) &&
               request.any_positive() && arrival_time >= 0 && duration >= 1;
    }
};

struct WorkerNode {
    std::int64_t id = 0;
    ResourceVector capacity;
    double alpha = 0.0;  // hardware assurance base, in [0, 0.5]
    double beta = 0.0;   // software assurance base, in [0, 0.5]
    bool rt = false;
    std::vector<std::int64_t> jobs;  // hosted job ids, kept sorted

    void add_job(std::int64_t job_id);
    void remove_job(std::int64_t job_id);
    bool hosts(std::int64_t job_id) const;
};

/// Minimum-assurance thresholds per criticality level. theta for NO is 0.
struct Thresholds {
    double theta_low = 0.5;
    double theta_high = 0.75;

    void validate() const {
        if (!(0.0 <= theta_low && theta_low < theta_high && theta_high <= 1.0))
            throw std::invalid_argument("thresholds must satisfy 0 <= low < high <= 1");
    }
};

using JobCatalog = std::map<std::int64_t, Job>;

/// Snapshot of the whole cluster: the unit every objective and scheduler
/// evaluates. Mutated only from a single-threaded simulation loop.
struct ClusterState {
    std::vector<WorkerNode> nodes;                 // insertion order, ids unique
    std::map<std::int64_t, std::int64_t> assigned; // job id -> node id
    std::vector<std::int64_t> pending;             // arrival order
    std::vector<std::int64_t> finished;            // terminated job ids
    JobCatalog jobs_catalog;
    std::int64_t clock = 0;

    const WorkerNode* find_node(std::int64_t node_id) const;
    WorkerNode* find_node(std::int64_t node_id);
    const Job& job(std::int64_t job_id) const;

    std::size_t assigned_count() const { return assigned.size(); }
    /// m = pending + active jobs.
    std::size_t live_jobs() const { return pending.size() + assigned.size(); }

    bool is_pending(std::int64_t job_id) const;
    void remove_pending(std::int64_t job_id);

    /// Place a pending job on a node. Caller has verified eligibility.
    void place(std::int64_t job_id, std::int64_t node_id);
    /// Move an assigned job back to pending, preserving arrival order.
    void unplace(std::int64_t job_id);
};

ResourceVector free_at_request(const WorkerNode& node, const JobCatalog& catalog);
ResourceVector free_at_limit(const WorkerNode& node, const JobCatalog& catalog);

/// Structural consistency check used by tests and debug builds: request-level
/// fit on every node, assigned/pending disjoint, jobs sets matching the
/// inverse of `assigned`. Throws std::logic_error on violation.
void check_state_consistency(const ClusterState& state);

}  // namespace mcsched
