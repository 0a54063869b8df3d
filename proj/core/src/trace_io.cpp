#include "mcsched/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

namespace mcsched {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) { known = true; break; }
        if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for key '") + key + "'");
    }
}

json range_json(const IntRange& r) { return json::array({r.lo, r.hi}); }
json range_json(const RealRange& r) { return json::array({r.lo, r.hi}); }

IntRange int_range(const json& j, const char* key, IntRange fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_array() || it->size() != 2)
        throw ConfigError(std::string(key) + " must be a [lo, hi] pair");
    return {(*it)[0].get<std::int64_t>(), (*it)[1].get<std::int64_t>()};
}

RealRange real_range(const json& j, const char* key, RealRange fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_array() || it->size() != 2)
        throw ConfigError(std::string(key) + " must be a [lo, hi] pair");
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

json generator_to_json(const GeneratorConfig& g) {
    json out;
    out["initial_nodes"] = range_json(g.initial_nodes);
    out["job_count"] = range_json(g.job_count);
    out["horizon"] = g.horizon;
    out["node_additions"] = range_json(g.node_additions);
    out["mean_duration"] = g.mean_duration;
    out["request_range"] = range_json(g.request_range);
    out["limit_scale"] = range_json(g.limit_scale);
    out["criticality_probs"] = {{"no", g.crit_prob_no}, {"low", g.crit_prob_low}, {"high", g.crit_prob_high}};
    out["rt_job_probs"] = {{"no", g.rt_prob_no}, {"low", g.rt_prob_low}, {"high", g.rt_prob_high}};
    out["capacity_range"] = range_json(g.capacity_range);
    out["rt_node_prob"] = g.rt_node_prob;
    out["alpha_beta_rt"] = range_json(g.alpha_beta_rt);
    out["alpha_beta_nonrt"] = range_json(g.alpha_beta_nonrt);
    return out;
}

GeneratorConfig generator_from_json(const json& j) {
    reject_unknown_keys(j, {"initial_nodes", "job_count", "horizon", "node_additions",
                            "mean_duration", "request_range", "limit_scale",
                            "criticality_probs", "rt_job_probs", "capacity_range",
                            "rt_node_prob", "alpha_beta_rt", "alpha_beta_nonrt"},
                        "generator config");
    GeneratorConfig g;
    g.initial_nodes = int_range(j, "initial_nodes", g.initial_nodes);
    g.job_count = int_range(j, "job_count", g.job_count);
    g.horizon = get_or<std::int64_t>(j, "horizon", g.horizon);
    g.node_additions = int_range(j, "node_additions", g.node_additions);
    g.mean_duration = get_or<std::int64_t>(j, "mean_duration", g.mean_duration);
    g.request_range = int_range(j, "request_range", g.request_range);
    g.limit_scale = real_range(j, "limit_scale", g.limit_scale);
    if (auto it = j.find("criticality_probs"); it != j.end()) {
        reject_unknown_keys(*it, {"no", "low", "high"}, "criticality_probs");
        g.crit_prob_no = get_or<double>(*it, "no", g.crit_prob_no);
        g.crit_prob_low = get_or<double>(*it, "low", g.crit_prob_low);
        g.crit_prob_high = get_or<double>(*it, "high", g.crit_prob_high);
    }
    if (auto it = j.find("rt_job_probs"); it != j.end()) {
        reject_unknown_keys(*it, {"no", "low", "high"}, "rt_job_probs");
        g.rt_prob_no = get_or<double>(*it, "no", g.rt_prob_no);
        g.rt_prob_low = get_or<double>(*it, "low", g.rt_prob_low);
        g.rt_prob_high = get_or<double>(*it, "high", g.rt_prob_high);
    }
    g.capacity_range = int_range(j, "capacity_range", g.capacity_range);
    g.rt_node_prob = get_or<double>(j, "rt_node_prob", g.rt_node_prob);
    g.alpha_beta_rt = real_range(j, "alpha_beta_rt", g.alpha_beta_rt);
    g.alpha_beta_nonrt = real_range(j, "alpha_beta_nonrt", g.alpha_beta_nonrt);
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return g;
}

json resources_to_json(const ResourceVector& r) {
    return {{"cpu", r.cpu}, {"memory", r.memory}, {"disk", r.disk}};
}

ResourceVector resources_from_json(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"cpu", "memory", "disk"}, where);
    ResourceVector r{j.at("cpu").get<std::int64_t>(), j.at("memory").get<std::int64_t>(),
                     j.at("disk").get<std::int64_t>()};
    if (!r.non_negative()) throw ConfigError("negative resource component in " + where);
    return r;
}

json node_to_json(const WorkerNode& n) {
    json out;
    out["id"] = n.id;
    out["capacity"] = resources_to_json(n.capacity);
    out["alpha"] = n.alpha;
    out["beta"] = n.beta;
    out["rt"] = n.rt;
    return out;
}

WorkerNode node_from_json(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"id", "capacity", "alpha", "beta", "rt"}, where);
    WorkerNode n;
    n.id = j.at("id").get<std::int64_t>();
    n.capacity = resources_from_json(j.at("capacity"), where + ".capacity");
    n.alpha = j.at("alpha").get<double>();
    n.beta = j.at("beta").get<double>();
    n.rt = j.at("rt").get<bool>();
    if (n.alpha < 0.0 || n.alpha > 0.5 || n.beta < 0.0 || n.beta > 0.5)
        throw ConfigError("alpha/beta out of [0, 0.5] in " + where);
    return n;
}

Criticality criticality_from_string(const std::string& s, const std::string& where) {
    if (s == "NO") return Criticality::No;
    if (s == "LOW") return Criticality::Low;
    if (s == "HIGH") return Criticality::High;
    throw ConfigError("unknown criticality '" + s + "' in " + where);
}

json job_to_json(const Job& job) {
    json out;
    out["id"] = job.id;
    out["request"] = resources_to_json(job.request);
    out["limit"] = resources_to_json(job.limit);
    out["criticality"] = to_string(job.criticality);
    out["rt"] = job.rt;
    out["arrival_time"] = job.arrival_time;
    out["duration"] = job.duration;
    return out;
}

Job job_from_json(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"id", "request", "limit", "criticality", "rt", "arrival_time", "duration"},
                        where);
    Job job;
    job.id = j.at("id").get<std::int64_t>();
    job.request = resources_from_json(j.at("request"), where + ".request");
    job.limit = resources_from_json(j.at("limit"), where + ".limit");
    job.criticality = criticality_from_string(j.at("criticality").get<std::string>(), where);
    job.rt = j.at("rt").get<bool>();
    job.arrival_time = j.at("arrival_time").get<std::int64_t>();
    job.duration = j.at("duration").get<std::int64_t>();
    if (!job.valid()) throw ConfigError("job violates its invariants in " + where);
    return job;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string serialize_trace(const EventTrace& trace) {
    json out;
    out["version"] = trace.version;
    out["seed"] = trace.seed;
    out["config"] = generator_to_json(trace.config);
    out["initial_nodes"] = json::array();
    for (const auto& n : trace.initial_nodes) out["initial_nodes"].push_back(node_to_json(n));
    out["events"] = json::array();
    for (const auto& ev : trace.events) {
        json e;
        e["t"] = ev.time;
        e["seq"] = ev.sequence;
        e["kind"] = to_string(ev.kind);
        switch (ev.kind) {
        case EventKind::NodeAdd: e["node"] = node_to_json(ev.node); break;
        case EventKind::JobArrival: e["job"] = job_to_json(ev.job); break;
        case EventKind::JobEnd: e["job_id"] = ev.job_id; break;
        }
        out["events"].push_back(std::move(e));
    }
    return out.dump(2) + "\n";
}

EventTrace parse_trace(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("trace is not valid JSON: ") + e.what());
    }
    reject_unknown_keys(root, {"version", "seed", "config", "initial_nodes", "events"}, "trace");

    EventTrace trace;
    trace.version = root.at("version").get<int>();
    if (trace.version != 1)
        throw ConfigError("unsupported trace version " + std::to_string(trace.version));
    trace.seed = root.at("seed").get<std::uint64_t>();
    trace.config = generator_from_json(root.at("config"));

    for (std::size_t i = 0; i < root.at("initial_nodes").size(); ++i)
        trace.initial_nodes.push_back(
            node_from_json(root["initial_nodes"][i], "initial_nodes[" + std::to_string(i) + "]"));

    std::int64_t prev_time = 0, prev_seq = -1;
    std::map<std::int64_t, std::int64_t> arrivals;  // job id -> event index
    const json& events = root.at("events");
    for (std::size_t i = 0; i < events.size(); ++i) {
        const json& e = events[i];
        std::string where = "events[" + std::to_string(i) + "]";
        auto bad = [&](const std::string& why) { throw ConfigError(where + ": " + why); };

        Event ev;
        ev.time = e.at("t").get<std::int64_t>();
        ev.sequence = e.at("seq").get<std::int64_t>();
        std::string kind = e.at("kind").get<std::string>();
        if (kind == "node_add") {
            reject_unknown_keys(e, {"t", "seq", "kind", "node"}, where);
            ev.kind = EventKind::NodeAdd;
            ev.node = node_from_json(e.at("node"), where + ".node");
        } else if (kind == "job_arrival") {
            reject_unknown_keys(e, {"t", "seq", "kind", "job"}, where);
            ev.kind = EventKind::JobArrival;
            ev.job = job_from_json(e.at("job"), where + ".job");
            if (ev.job.arrival_time != ev.time) bad("job arrival_time disagrees with event time");
            arrivals[ev.job.id] = static_cast<std::int64_t>(i);
        } else if (kind == "job_end") {
            reject_unknown_keys(e, {"t", "seq", "kind", "job_id"}, where);
            ev.kind = EventKind::JobEnd;
            ev.job_id = e.at("job_id").get<std::int64_t>();
            if (!arrivals.count(ev.job_id)) bad("termination precedes the arrival of job " +
                                                std::to_string(ev.job_id));
        } else {
            bad("unknown event kind '" + kind + "'");
        }
        if (ev.time < prev_time) bad("event time goes backwards");
        if (ev.sequence <= prev_seq) bad("sequence numbers must be strictly increasing");
        prev_time = ev.time;
        prev_seq = ev.sequence;
        trace.events.push_back(std::move(ev));
    }
    return trace;
}

void ScenarioConfig::validate() const {
    try {
        generator.validate();
        thresholds.validate();
        gamma.validate();
        shape.validate();
        weights.normalized();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (max_rebalance_moves < 0) throw ConfigError("max_rebalance_moves must be >= 0");
}

SchedulerConfig ScenarioConfig::scheduler_config() const {
    return {weights, thresholds, gamma, assurance_scope, shape};
}

RunOptions ScenarioConfig::run_options() const {
    RunOptions opts;
    opts.rebalance_on = rebalance_on;
    opts.max_rebalance_moves = max_rebalance_moves;
    return opts;
}

std::string serialize_scenario_config(const ScenarioConfig& c) {
    json out;
    out["generator"] = generator_to_json(c.generator);
    out["weights"] = {{"acceptance", c.weights.acceptance},
                      {"assurance", c.weights.assurance},
                      {"residual", c.weights.residual}};
    out["thresholds"] = {{"low", c.thresholds.theta_low}, {"high", c.thresholds.theta_high}};
    out["gamma"] = {{"all_limits", c.gamma.all_limits},
                    {"low_limits", c.gamma.low_limits},
                    {"high_limits", c.gamma.high_limits},
                    {"requests_only", c.gamma.requests_only}};
    json shape = json::array();
    for (auto [x, y] : c.shape.points) shape.push_back(json::array({x, y}));
    out["policy_options"] = {
        {"shape_points", shape},
        {"rebalance_on", c.rebalance_on == RebalanceTrigger::NodeAdd      ? "node_add"
                         : c.rebalance_on == RebalanceTrigger::EveryEvent ? "every_event"
                                                                          : "never"},
        {"assurance_scope", c.assurance_scope == AssuranceScope::RtOnly ? "rt_only" : "all"},
        {"max_rebalance_moves", c.max_rebalance_moves}};
    return out.dump(2) + "\n";
}

ScenarioConfig parse_scenario_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown_keys(root, {"generator", "weights", "thresholds", "gamma", "policy_options"},
                        "config");
    ScenarioConfig c;
    if (auto it = root.find("generator"); it != root.end())
        c.generator = generator_from_json(*it);
    if (auto it = root.find("weights"); it != root.end()) {
        reject_unknown_keys(*it, {"acceptance", "assurance", "residual"}, "weights");
        c.weights.acceptance = get_or<double>(*it, "acceptance", c.weights.acceptance);
        c.weights.assurance = get_or<double>(*it, "assurance", c.weights.assurance);
        c.weights.residual = get_or<double>(*it, "residual", c.weights.residual);
    }
    if (auto it = root.find("thresholds"); it != root.end()) {
        reject_unknown_keys(*it, {"low", "high"}, "thresholds");
        c.thresholds.theta_low = get_or<double>(*it, "low", c.thresholds.theta_low);
        c.thresholds.theta_high = get_or<double>(*it, "high", c.thresholds.theta_high);
    }
    if (auto it = root.find("gamma"); it != root.end()) {
        reject_unknown_keys(*it, {"all_limits", "low_limits", "high_limits", "requests_only"},
                            "gamma");
        c.gamma.all_limits = get_or<double>(*it, "all_limits", c.gamma.all_limits);
        c.gamma.low_limits = get_or<double>(*it, "low_limits", c.gamma.low_limits);
        c.gamma.high_limits = get_or<double>(*it, "high_limits", c.gamma.high_limits);
        c.gamma.requests_only = get_or<double>(*it, "requests_only", c.gamma.requests_only);
    }
    if (auto it = root.find("policy_options"); it != root.end()) {
        reject_unknown_keys(*it, {"shape_points", "rebalance_on", "assurance_scope",
                                  "max_rebalance_moves"},
                            "policy_options");
        if (auto sp = it->find("shape_points"); sp != it->end()) {
            c.shape.points.clear();
            for (const auto& p : *sp) {
                if (!p.is_array() || p.size() != 2)
                    throw ConfigError("shape_points entries must be [x, y] pairs");
                c.shape.points.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
        }
        std::string trigger = get_or<std::string>(*it, "rebalance_on", "node_add");
        if (trigger == "node_add") c.rebalance_on = RebalanceTrigger::NodeAdd;
        else if (trigger == "every_event") c.rebalance_on = RebalanceTrigger::EveryEvent;
        else if (trigger == "never") c.rebalance_on = RebalanceTrigger::Never;
        else throw ConfigError("unknown rebalance_on '" + trigger + "'");
        std::string scope = get_or<std::string>(*it, "assurance_scope", "rt_only");
        if (scope == "rt_only") c.assurance_scope = AssuranceScope::RtOnly;
        else if (scope == "all") c.assurance_scope = AssuranceScope::All;
        else throw ConfigError("unknown assurance_scope '" + scope + "'");
        c.max_rebalance_moves = get_or<int>(*it, "max_rebalance_moves", c.max_rebalance_moves);
    }
    c.validate();
    return c;
}

std::string export_metrics(const MetricsSeries& series, const std::string& policy_label,
                           const std::string& trace_sha256) {
    std::ostringstream out;
    if (!trace_sha256.empty()) out << "# trace_sha256=" << trace_sha256 << "\n";
    out << "t,seq,event,policy,acceptance,assurance,residual,weighted_sum,score,"
           "assigned,pending,nodes,moves\n";
    for (const auto& s : series.samples) {
        out << s.time << ',' << s.sequence << ',' << s.event << ',' << policy_label << ','
            << format_real(s.objective.acceptance) << ',' << format_real(s.objective.assurance)
            << ',' << format_real(s.objective.residual) << ','
            << format_real(s.objective.weighted_sum) << ',' << format_real(s.objective.score)
            << ',' << s.assigned << ',' << s.pending << ',' << s.nodes << ','
            << s.rebalance_moves << '\n';
    }
    return out.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

}  // namespace mcsched
