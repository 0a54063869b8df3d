#pragma once

#include <string>

#include "mcsched/simulator.hpp"

namespace mcsched {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One document holding generation, scoring, and run options. Unknown keys
/// are rejected; every omitted key takes its documented default, so the
/// serialized echo of a parsed config is always complete.
struct ScenarioConfig {
    GeneratorConfig generator;
    Weights weights;
    Thresholds thresholds;
    GammaTable gamma;
    ShapeFunction shape;
    RebalanceTrigger rebalance_on = RebalanceTrigger::NodeAdd;
    AssuranceScope assurance_scope = AssuranceScope::RtOnly;
    int max_rebalance_moves = 100;

    void validate() const;
    SchedulerConfig scheduler_config() const;
    RunOptions run_options() const;
};

/// Trace files are UTF-8 JSON with keys in a fixed order, so identical
/// traces serialize to identical bytes. parse(serialize(x)) == x.
std::string serialize_trace(const EventTrace& trace);
EventTrace parse_trace(const std::string& text);

std::string serialize_scenario_config(const ScenarioConfig& config);
ScenarioConfig parse_scenario_config(const std::string& text);

/// CSV with header `t,seq,event,policy,...`; reals printed with exactly six
/// decimals. A non-empty trace_sha256 is emitted as a leading comment line.
std::string export_metrics(const MetricsSeries& series, const std::string& policy_label,
                           const std::string& trace_sha256 = "");

std::string sha256_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mcsched
