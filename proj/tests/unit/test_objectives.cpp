#include "doctest.h"

#include "support/test_helpers.hpp"

using namespace mcsched;

namespace {

ClusterState cluster(std::vector<WorkerNode> nodes) {
    ClusterState state;
    state.nodes = std::move(nodes);
    return state;
}

WorkerNode node(std::int64_t id, bool rt, double alpha = 0.4, double beta = 0.4) {
    return WorkerNode{.id = id, .capacity = {1000, 1000, 1000}, .alpha = alpha, .beta = beta, .rt = rt};
}

void add_pending(ClusterState& state, std::int64_t id, std::int64_t req = 100,
                 std::int64_t lim = 100) {
    state.jobs_catalog.emplace(
        id, Job{.id = id, .request = {req, req, req}, .limit = {lim, lim, lim}});
    state.pending.push_back(id);
}

}  // namespace

TEST_CASE("acceptance_rate") {
    ClusterState state = cluster({node(0, true)});
    SUBCASE("idle cluster counts as full acceptance") {
        CHECK(acceptance_rate(state) == 1.0);
    }
    SUBCASE("assigned over live jobs") {
        for (int i = 0; i < 4; ++i) add_pending(state, i);
        for (int i = 0; i < 3; ++i) state.place(i, 0);
        CHECK(acceptance_rate(state) == doctest::Approx(0.75));
    }
    SUBCASE("everything placed") {
        for (int i = 0; i < 5; ++i) {
            add_pending(state, i);
            state.place(i, 0);
        }
        CHECK(acceptance_rate(state) == 1.0);
    }
}

TEST_CASE("avg_assurance scopes") {
    GammaTable gamma;
    SUBCASE("mean over RT nodes") {
        ClusterState state = cluster({node(0, true, 0.4, 0.4), node(1, true, 0.3, 0.3)});
        CHECK(avg_assurance(state, gamma) == doctest::Approx(0.7));
    }
    SUBCASE("non-RT nodes are excluded when an RT node exists") {
        ClusterState state = cluster({node(0, true, 0.5, 0.4), node(1, false, 0.05, 0.05)});
        CHECK(avg_assurance(state, gamma) == doctest::Approx(0.9));
        CHECK(avg_assurance(state, gamma, AssuranceScope::All) == doctest::Approx(0.5));
    }
    SUBCASE("falls back to all nodes when none is RT") {
        ClusterState state = cluster({node(0, false, 0.3, 0.3), node(1, false, 0.2, 0.2)});
        CHECK(avg_assurance(state, gamma) == doctest::Approx(0.5));
    }
    SUBCASE("no nodes at all") {
        CHECK(avg_assurance(ClusterState{}, gamma) == 0.0);
    }
}

TEST_CASE("residual_capacity") {
    SUBCASE("empty node scores 1") {
        CHECK(residual_capacity(cluster({node(0, true)})) == doctest::Approx(1.0));
    }
    SUBCASE("half-limit job leaves a quarter") {
        ClusterState state = cluster({node(0, true)});
        add_pending(state, 1, 500, 500);
        state.place(1, 0);
        CHECK(residual_capacity(state) == doctest::Approx(0.25));
    }
    SUBCASE("one packed node and one empty average to a half") {
        ClusterState state = cluster({node(0, true), node(1, true)});
        add_pending(state, 1, 1000, 1000);
        state.place(1, 0);
        CHECK(residual_capacity(state) == doctest::Approx(0.5));
    }
    SUBCASE("no nodes") {
        CHECK(residual_capacity(ClusterState{}) == 0.0);
    }
}

TEST_CASE("objective worked example") {
    // acceptance 0.75, assurance 0.7, residual 0.25 under the published weights.
    ClusterState state = cluster({node(0, true, 0.4, 0.4), node(1, true, 0.3, 0.3)});
    add_pending(state, 0, 250, 250);
    add_pending(state, 1, 250, 250);
    add_pending(state, 2, 500, 500);
    add_pending(state, 3, 100, 100);
    state.place(0, 0);
    state.place(1, 0);
    state.place(2, 1);
    GammaTable gamma;
    REQUIRE(acceptance_rate(state) == doctest::Approx(0.75));
    REQUIRE(avg_assurance(state, gamma) == doctest::Approx(0.7));
    REQUIRE(residual_capacity(state) == doctest::Approx(0.25).epsilon(1e-12));

    ObjectiveBreakdown b = objective(state, Weights{52.5, 42.5, 5.0}, gamma);
    CHECK(b.weighted_sum == doctest::Approx(0.70375).epsilon(1e-12));
    CHECK(b.score == doctest::Approx(0.5278125).epsilon(1e-12));
}

TEST_CASE("objective conventions on the empty cluster") {
    ObjectiveBreakdown b = objective(ClusterState{}, Weights{}, GammaTable{});
    CHECK(b.acceptance == 1.0);
    CHECK(b.assurance == 0.0);
    CHECK(b.residual == 0.0);
    CHECK(b.score == doctest::Approx(0.525));  // w_acceptance after normalization
}

TEST_CASE("all components in [0,1] over random states") {
    std::mt19937_64 rng(23);
    Weights weights{52.5, 42.5, 5.0};
    GammaTable gamma;
    for (int i = 0; i < 2000; ++i) {
        ClusterState state = testing::random_state(rng);
        ObjectiveBreakdown b = objective(state, weights, gamma);
        for (double v : {b.acceptance, b.assurance, b.residual, b.weighted_sum, b.score}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("placing a pending job never lowers acceptance") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 300; ++i) {
        ClusterState state = testing::random_state(rng);
        if (state.pending.empty() || state.nodes.empty()) continue;
        const Job& job = state.job(state.pending.front());
        for (const auto& n : state.nodes) {
            if (!job.request.fits_within(free_at_request(n, state.jobs_catalog))) continue;
            double before = acceptance_rate(state);
            ClusterState copy = state;
            copy.place(job.id, n.id);
            CHECK(acceptance_rate(copy) >= before);
            break;
        }
    }
}

TEST_CASE("residual strictly decreases on a real placement") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        ClusterState state = testing::random_state(rng);
        if (state.pending.empty() || state.nodes.empty()) continue;
        const Job& job = state.job(state.pending.front());
        for (const auto& n : state.nodes) {
            if (!job.request.fits_within(free_at_request(n, state.jobs_catalog))) continue;
            if (free_at_limit(n, state.jobs_catalog) == ResourceVector{0, 0, 0}) continue;
            double before = residual_capacity(state);
            ClusterState copy = state;
            copy.place(job.id, n.id);
            CHECK(residual_capacity(copy) < before);
            break;
        }
    }
}

TEST_CASE("packing two identical jobs on one node beats spreading them") {
    auto packed = cluster({node(0, true), node(1, true)});
    auto spread = cluster({node(0, true), node(1, true)});
    for (ClusterState* s : {&packed, &spread}) {
        add_pending(*s, 1, 400, 400);
        add_pending(*s, 2, 400, 400);
    }
    packed.place(1, 0);
    packed.place(2, 0);
    spread.place(1, 0);
    spread.place(2, 1);
    CHECK(residual_capacity(packed) >= residual_capacity(spread));
}

TEST_CASE("zero acceptance forces a zero score") {
    ClusterState state = cluster({node(0, true)});
    add_pending(state, 1, 2000, 2000);  // cannot fit anywhere
    ObjectiveBreakdown b = objective(state, Weights{}, GammaTable{});
    CHECK(b.acceptance == 0.0);
    CHECK(b.score == 0.0);
}

TEST_CASE("weights validation") {
    CHECK_THROWS_AS((Weights{0.0, 0.0, 0.0}.normalized()), std::invalid_argument);
    CHECK_THROWS_AS((Weights{-1.0, 1.0, 1.0}.normalized()), std::invalid_argument);
    Weights w = Weights{52.5, 42.5, 5.0}.normalized();
    CHECK(w.acceptance == doctest::Approx(0.525));
    CHECK(w.assurance == doctest::Approx(0.425));
    CHECK(w.residual == doctest::Approx(0.05));
}
