#include "doctest.h"

#include "mcsched/trace_io.hpp"
#include "support/test_helpers.hpp"

using namespace mcsched;

TEST_CASE("trace round-trip is the identity") {
    GeneratorConfig cfg;
    cfg.initial_nodes = {2, 4};
    cfg.job_count = {10, 30};
    cfg.horizon = 100;
    for (std::uint64_t seed : {1ull, 5ull, 123ull}) {
        EventTrace trace = generate_trace(cfg, seed);
        std::string bytes = serialize_trace(trace);
        EventTrace parsed = parse_trace(bytes);
        CHECK(serialize_trace(parsed) == bytes);
    }
}

TEST_CASE("hand-written minimal trace parses and runs") {
    const char* text = R"({
      "version": 1,
      "seed": 0,
      "config": {},
      "initial_nodes": [
        {"id": 0, "capacity": {"cpu": 1000, "memory": 1000, "disk": 1000},
         "alpha": 0.45, "beta": 0.45, "rt": true}
      ],
      "events": [
        {"t": 1, "seq": 0, "kind": "job_arrival",
         "job": {"id": 0, "request": {"cpu": 100, "memory": 100, "disk": 100},
                 "limit": {"cpu": 200, "memory": 200, "disk": 200},
                 "criticality": "LOW", "rt": true, "arrival_time": 1, "duration": 4}},
        {"t": 5, "seq": 1, "kind": "job_end", "job_id": 0}
      ]
    })";
    EventTrace trace = parse_trace(text);
    CHECK(trace.config.initial_nodes.lo == 4);  // defaults materialized
    MetricsSeries series =
        run(trace, Policy::K4s, mcsched::testing::default_scheduler_config());
    REQUIRE(series.samples.size() == 3);
    CHECK(series.samples[1].assigned == 1);
}

TEST_CASE("parse errors name the offending event") {
    SUBCASE("job_end before arrival") {
        const char* text = R"({
          "version": 1, "seed": 0, "config": {}, "initial_nodes": [],
          "events": [{"t": 1, "seq": 0, "kind": "job_end", "job_id": 7}]
        })";
        try {
            parse_trace(text);
            FAIL("expected a parse error");
        } catch (const ConfigError& e) {
            std::string what = e.what();
            CHECK(what.find("events[0]") != std::string::npos);
            CHECK(what.find("7") != std::string::npos);
        }
    }
    SUBCASE("version mismatch") {
        CHECK_THROWS_AS(
            parse_trace(R"({"version": 2, "seed": 0, "config": {}, "initial_nodes": [], "events": []})"),
            ConfigError);
    }
    SUBCASE("unknown key") {
        CHECK_THROWS_AS(
            parse_trace(R"({"version": 1, "seed": 0, "config": {}, "initial_nodes": [], "events": [], "extra": 1})"),
            ConfigError);
    }
    SUBCASE("decreasing time") {
        const char* text = R"({
          "version": 1, "seed": 0, "config": {}, "initial_nodes": [],
          "events": [
            {"t": 5, "seq": 0, "kind": "job_arrival",
             "job": {"id": 0, "request": {"cpu": 1, "memory": 1, "disk": 1},
                     "limit": {"cpu": 1, "memory": 1, "disk": 1},
                     "criticality": "NO", "rt": false, "arrival_time": 5, "duration": 1}},
            {"t": 2, "seq": 1, "kind": "job_end", "job_id": 0}
          ]
        })";
        CHECK_THROWS_AS(parse_trace(text), ConfigError);
    }
}

TEST_CASE("metrics CSV formatting") {
    SUBCASE("empty series is header-only") {
        CHECK(export_metrics(MetricsSeries{}, "k4s") ==
              "t,seq,event,policy,acceptance,assurance,residual,weighted_sum,score,"
              "assigned,pending,nodes,moves\n");
    }
    SUBCASE("reals carry exactly six decimals") {
        MetricsSample s;
        s.time = 3;
        s.sequence = 0;
        s.event = "job_arrival";
        s.objective.acceptance = 0.75;
        MetricsSeries series;
        series.samples.push_back(s);
        std::string csv = export_metrics(series, "k4s");
        CHECK(csv.find("3,0,job_arrival,k4s,0.750000,") != std::string::npos);
    }
    SUBCASE("sha comment line") {
        std::string csv = export_metrics(MetricsSeries{}, "k4s", "abc123");
        CHECK(csv.rfind("# trace_sha256=abc123\n", 0) == 0);
    }
}

TEST_CASE("scenario config") {
    SUBCASE("defaults materialize on an empty document") {
        ScenarioConfig cfg = parse_scenario_config("{}");
        CHECK(cfg.weights.acceptance == 52.5);
        CHECK(cfg.thresholds.theta_high == 0.75);
        CHECK(cfg.gamma.low_limits == 0.85);
        CHECK(cfg.rebalance_on == RebalanceTrigger::NodeAdd);
        // The echo is complete: reparsing it changes nothing.
        std::string echoed = serialize_scenario_config(cfg);
        CHECK(serialize_scenario_config(parse_scenario_config(echoed)) == echoed);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(parse_scenario_config(R"({"weigths": {}})"), ConfigError);
        CHECK_THROWS_AS(parse_scenario_config(R"({"weights": {"accept": 1}})"), ConfigError);
    }
    SUBCASE("non-monotone shape points are rejected") {
        CHECK_THROWS_AS(parse_scenario_config(
                            R"({"policy_options": {"shape_points": [[0,0.5],[0.5,0.2],[1,1]]}})"),
                        ConfigError);
    }
    SUBCASE("values flow through") {
        ScenarioConfig cfg = parse_scenario_config(R"({
          "weights": {"acceptance": 1, "assurance": 1, "residual": 2},
          "thresholds": {"low": 0.4, "high": 0.8},
          "policy_options": {"rebalance_on": "never", "assurance_scope": "all"}
        })");
        CHECK(cfg.weights.residual == 2.0);
        CHECK(cfg.thresholds.theta_low == 0.4);
        CHECK(cfg.rebalance_on == RebalanceTrigger::Never);
        CHECK(cfg.assurance_scope == AssuranceScope::All);
    }
}

TEST_CASE("sha256 known answer") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
