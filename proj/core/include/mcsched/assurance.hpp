#pragma once

#include "mcsched/model.hpp"

namespace mcsched {

/// The lowest criticality class whose jobs the node can serve at their
/// limits while every lower class still gets its requests. Ordered
/// best-to-worst as listed.
enum class GuaranteeTier : int {
    AllLimits = 0,      // every hosted job fits at its limit
    LowLimits = 1,      // LOW and HIGH fit at limit, NO at request
    HighLimits = 2,     // only HIGH fits at limit
    RequestsOnly = 3,   // only requests are guaranteed
};

inline const char* to_string(GuaranteeTier t) {
    switch (t) {
    case GuaranteeTier::AllLimits: return "all_limits";
    case GuaranteeTier::LowLimits: return "low_limits";
    case GuaranteeTier::HighLimits: return "high_limits";
    case GuaranteeTier::RequestsOnly: return "requests_only";
    }
    return "?";
}

/// Load factor per guarantee tier. Monotone non-increasing along the tier
/// ordering, with the unloaded tier pinned at 1.
struct GammaTable {
    double all_limits = 1.0;
    double low_limits = 0.85;
    double high_limits = 0.7;
    double requests_only = 0.5;

    double at(GuaranteeTier t) const {
        switch (t) {
        case GuaranteeTier::AllLimits: return all_limits;
        case GuaranteeTier::LowLimits: return low_limits;
        case GuaranteeTier::HighLimits: return high_limits;
        case GuaranteeTier::RequestsOnly: return requests_only;
        }
        return 0.0;
    }

    void validate() const {
        if (all_limits != 1.0)
            throw std::invalid_argument("gamma at all_limits must be 1.0");
        if (!(all_limits >= low_limits && low_limits >= high_limits &&
              high_limits >= requests_only && requests_only >= 0.0))
            throw std::invalid_argument("gamma table must be non-increasing in [0,1]");
    }
};

GuaranteeTier guaranteed_tier(const WorkerNode& node, const JobCatalog& catalog);

/// Guarantee tier the node would have with `extra` added to its job set.
GuaranteeTier guaranteed_tier_with(const WorkerNode& node, const JobCatalog& catalog,
                                   const Job& extra);

/// A = (alpha + beta) * gamma(tier), in [0, 1].
double node_assurance(const WorkerNode& node, const JobCatalog& catalog,
                      const GammaTable& gamma);

/// Hypothetical assurance A* if `job` were assigned; the node is not mutated.
double assurance_if_assigned(const WorkerNode& node, const Job& job,
                             const JobCatalog& catalog, const GammaTable& gamma);

/// Minimum assurance a node must keep to host a job of this criticality.
inline double threshold_of(Criticality c, const Thresholds& thresholds) {
    switch (c) {
    case Criticality::No: return 0.0;
    case Criticality::Low: return thresholds.theta_low;
    case Criticality::High: return thresholds.theta_high;
    }
    return 0.0;
}

}  // namespace mcsched
