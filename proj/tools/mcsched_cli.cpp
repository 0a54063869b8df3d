// Command-line front end: generate traces, replay them under a scheduling
// policy, and compare all policies on one trace.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "mcsched/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int verbosity = 1;  // 0 quiet, 1 normal, 2 verbose

void info(const std::string& msg) {
    if (verbosity >= 1) std::cerr << msg << "\n";
}

void debug(const std::string& msg) {
    if (verbosity >= 2) std::cerr << msg << "\n";
}

mcsched::Weights parse_weights(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw CliError("malformed weight '" + part + "'");
        }
    }
    if (vals.size() != 3) throw CliError("--weights needs exactly three comma-separated values");
    if (vals[0] < 0 || vals[1] < 0 || vals[2] < 0) throw CliError("weights must be non-negative");
    return {vals[0], vals[1], vals[2]};
}

mcsched::ScenarioConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    return mcsched::parse_scenario_config(mcsched::read_file(path));
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MCSCHED_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw CliError("MCSCHED_SEED is not a valid integer");
        }
    }
    throw CliError("no seed given (use --seed or MCSCHED_SEED)");
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

int cmd_gen(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
            const std::string& out_path) {
    auto config = load_config(config_path);
    std::uint64_t seed = resolve_seed(seed_flag);
    auto trace = mcsched::generate_trace(config.generator, seed);
    mcsched::write_file(out_path, mcsched::serialize_trace(trace));
    info("wrote " + out_path + " (" + std::to_string(trace.initial_nodes.size()) +
         " initial nodes, " + std::to_string(trace.events.size()) + " events, seed " +
         std::to_string(seed) + ")");
    return kExitOk;
}

int cmd_run(const std::string& trace_path, const std::string& policy_name,
            const std::string& weights_text, const std::string& config_path,
            const std::string& out_path) {
    auto policy = mcsched::parse_policy(policy_name);
    if (!policy) throw CliError("unknown policy '" + policy_name + "'");
    auto config = load_config(config_path);
    if (!weights_text.empty()) config.weights = parse_weights(weights_text);

    std::string bytes = mcsched::read_file(trace_path);
    auto trace = mcsched::parse_trace(bytes);
    debug("running policy " + std::string(mcsched::to_string(*policy)));
    auto series = mcsched::run(trace, *policy, config.scheduler_config(), config.run_options());
    mcsched::write_file(out_path, mcsched::export_metrics(series, mcsched::to_string(*policy),
                                                          mcsched::sha256_hex(bytes)));
    info("wrote " + out_path + " (" + std::to_string(series.samples.size()) + " samples)");
    return kExitOk;
}

int cmd_compare(const std::string& trace_path, const std::string& weights_text,
                const std::string& config_path, const std::string& out_dir) {
    auto config = load_config(config_path);
    if (!weights_text.empty()) config.weights = parse_weights(weights_text);

    std::string bytes = mcsched::read_file(trace_path);
    auto trace = mcsched::parse_trace(bytes);
    std::string sha = mcsched::sha256_hex(bytes);
    std::filesystem::create_directories(out_dir);

    std::ostringstream summary;
    summary << "policy,acceptance,assurance,residual,weighted_sum,score,moves\n";
    for (auto policy : {mcsched::Policy::K4s, mcsched::Policy::LeastAllocated,
                        mcsched::Policy::MostAllocated,
                        mcsched::Policy::RequestedToCapacityRatio}) {
        std::string label = mcsched::to_string(policy);
        debug("running policy " + label);
        auto series = mcsched::run(trace, policy, config.scheduler_config(),
                                   config.run_options());
        std::string path = out_dir + "/" + label + ".csv";
        mcsched::write_file(path, mcsched::export_metrics(series, label, sha));
        info("wrote " + path);

        auto avg = mcsched::time_averaged(series);
        std::int64_t moves =
            series.samples.empty() ? 0 : series.samples.back().rebalance_moves;
        summary << label << ',' << format_real(avg.acceptance) << ','
                << format_real(avg.assurance) << ',' << format_real(avg.residual) << ','
                << format_real(avg.weighted_sum) << ',' << format_real(avg.score) << ','
                << moves << '\n';
    }
    mcsched::write_file(out_dir + "/summary.csv", summary.str());
    info("wrote " + out_dir + "/summary.csv");
    return kExitOk;
}

int cmd_validate(const std::string& trace_path) {
    auto trace = mcsched::parse_trace(mcsched::read_file(trace_path));
    info(trace_path + ": valid (" + std::to_string(trace.initial_nodes.size()) +
         " initial nodes, " + std::to_string(trace.events.size()) + " events)");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed-criticality cluster scheduling simulator"};
    app.require_subcommand(1);

    bool quiet = false, verbose = false;
    app.add_flag("--quiet", quiet, "Suppress progress output");
    app.add_flag("--verbose", verbose, "Extra progress output");

    std::string config_path, trace_path, out_path, out_dir, policy_name, weights_text;
    std::optional<std::uint64_t> seed_flag;

    auto* gen = app.add_subcommand("gen", "Generate a seeded workload trace");
    gen->add_option("--config", config_path, "Scenario config JSON");
    gen->add_option("--seed", seed_flag, "Generator seed (fallback: MCSCHED_SEED)");
    gen->add_option("--out", out_path, "Output trace path")->required();

    auto* run = app.add_subcommand("run", "Replay a trace under one policy");
    run->add_option("--trace", trace_path, "Trace JSON")->required();
    run->add_option("--policy", policy_name,
                    "k4s | least_allocated | most_allocated | requested_to_capacity_ratio")
        ->required();
    run->add_option("--weights", weights_text, "Objective weights, e.g. 52.5,42.5,5");
    run->add_option("--config", config_path, "Scenario config JSON");
    run->add_option("--out", out_path, "Output metrics CSV")->required();

    auto* compare = app.add_subcommand("compare", "Run all four policies on one trace");
    compare->add_option("--trace", trace_path, "Trace JSON")->required();
    compare->add_option("--weights", weights_text, "Objective weights, e.g. 52.5,42.5,5");
    compare->add_option("--config", config_path, "Scenario config JSON");
    compare->add_option("--out-dir", out_dir, "Output directory")->required();

    auto* validate = app.add_subcommand("validate", "Check a trace file");
    validate->add_option("--trace", trace_path, "Trace JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    if (quiet) verbosity = 0;
    if (verbose) verbosity = 2;

    try {
        if (gen->parsed()) return cmd_gen(config_path, seed_flag, out_path);
        if (run->parsed()) return cmd_run(trace_path, policy_name, weights_text, config_path, out_path);
        if (compare->parsed()) return cmd_compare(trace_path, weights_text, config_path, out_dir);
        if (validate->parsed()) return cmd_validate(trace_path);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mcsched::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const mcsched::TraceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
