// bgpimpact command line front end. Links only the public C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bgpimpact.h"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

int exit_code_of(bgpi_status st) {
    switch (st) {
        case BGPI_OK:
            return 0;
        case BGPI_ERR_ARGUMENT:
            return kExitUsage;
        case BGPI_ERR_DATA:
            return kExitData;
        case BGPI_ERR_INTERNAL:
            return kExitInternal;
    }
    return kExitInternal;
}

struct CliError {
    int code;
    std::string message;
};

void check(bgpi_status st) {
    if (st != BGPI_OK) throw CliError{exit_code_of(st), bgpi_last_error()};
}

void usage_error(const std::string& message) { throw CliError{kExitUsage, message}; }
void data_error(const std::string& message) { throw CliError{kExitData, message}; }

using GraphPtr = std::unique_ptr<bgpi_graph, decltype(&bgpi_graph_free)>;
using DatasetPtr = std::unique_ptr<bgpi_dataset, decltype(&bgpi_dataset_free)>;
using ModelPtr = std::unique_ptr<bgpi_lre_model, decltype(&bgpi_lre_model_free)>;
using MapPtr = std::unique_ptr<bgpi_pfx2as, decltype(&bgpi_pfx2as_free)>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    bgpi_string_free(s);
    return out;
}

struct AsnBuffer {
    uint32_t* data = nullptr;
    size_t len = 0;
    ~AsnBuffer() { bgpi_buffer_free(data); }
};

void require_file(const std::string& path) {
    if (!std::filesystem::exists(path)) data_error("input file does not exist: " + path);
}

// Results are written to a temporary file first so a failed run leaves no
// partial output; "-" writes to stdout.
void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) data_error("cannot write " + tmp);
        out << content;
        if (!out.good()) {
            out.close();
            std::filesystem::remove(tmp);
            data_error("write failed for " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        data_error("cannot move output into place: " + path);
    }
}

std::string read_file(const std::string& path) {
    require_file(path);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------- simulate ----------------

struct MonitorSpec {
    std::string label;
    std::string source;  // random | clustered | file
    size_t m = 0;
    size_t clusters = 3;
    std::string path;
    std::string observation = "control-plane";  // or "ping"
    uint32_t n_ip = 1;
    uint64_t ping_seed = 0;
};

// label=random:<m>[:ping:<n_ip>] | label=clustered:<m>[:<k>][:ping:<n_ip>]
// | label=file:<path>
MonitorSpec parse_monitor_spec(const std::string& text) {
    MonitorSpec spec;
    size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0) usage_error("bad monitor spec '" + text + "'");
    spec.label = text.substr(0, eq);
    std::string rest = text.substr(eq + 1);
    if (rest.rfind("file:", 0) == 0) {
        spec.source = "file";
        spec.path = rest.substr(5);
        if (spec.path.empty()) usage_error("bad monitor spec '" + text + "'");
        return spec;
    }
    std::vector<std::string> toks;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ':')) toks.push_back(tok);
    if (toks.size() < 2) usage_error("bad monitor spec '" + text + "'");
    spec.source = toks[0];
    if (spec.source != "random" && spec.source != "clustered")
        usage_error("unknown monitor source '" + spec.source + "' in '" + text + "'");
    try {
        spec.m = std::stoul(toks[1]);
        size_t i = 2;
        if (spec.source == "clustered" && i < toks.size() && toks[i] != "ping")
            spec.clusters = std::stoul(toks[i++]);
        if (i < toks.size()) {
            if (toks[i] != "ping" || i + 1 >= toks.size())
                usage_error("bad monitor spec '" + text + "'");
            spec.observation = "ping";
            spec.n_ip = uint32_t(std::stoul(toks[i + 1]));
            i += 2;
        }
        if (i != toks.size()) usage_error("bad monitor spec '" + text + "'");
    } catch (const CliError&) {
        throw;
    } catch (const std::exception&) {
        usage_error("bad monitor spec '" + text + "'");
    }
    return spec;
}

struct SimulateConfig {
    std::string graph_path;
    uint64_t synthetic = 0;
    uint64_t graph_seed = 0;
    bool has_graph_seed = false;
    size_t count = 0;
    uint32_t hijack_type = 0;
    std::string prefix_mode = "exact";
    std::optional<uint64_t> seed;
    // monitor sampling seed; defaults to the scenario seed. Setting it lets
    // several datasets (e.g. a train/test pair) share their monitor sets.
    std::optional<uint64_t> monitor_seed;
    std::string victim_pool_path;
    std::string hijacker_pool_path;
    bool symmetric_pairs = false;
    bool dump_decisions = false;
    unsigned jobs = 1;
    std::vector<MonitorSpec> monitors;
    std::string output;
};

void load_simulate_config(const std::string& path, SimulateConfig& cfg) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        data_error("bad config JSON: " + std::string(e.what()));
    }
    try {
        if (j.contains("topology")) {
            const auto& t = j["topology"];
            if (t.contains("path")) cfg.graph_path = t["path"].get<std::string>();
            if (t.contains("synthetic")) cfg.synthetic = t["synthetic"].get<uint64_t>();
            if (t.contains("seed")) {
                cfg.graph_seed = t["seed"].get<uint64_t>();
                cfg.has_graph_seed = true;
            }
        }
        if (j.contains("scenarios")) {
            const auto& s = j["scenarios"];
            if (s.contains("count")) cfg.count = s["count"].get<size_t>();
            if (s.contains("type")) cfg.hijack_type = s["type"].get<uint32_t>();
            if (s.contains("prefix_mode")) cfg.prefix_mode = s["prefix_mode"].get<std::string>();
            if (s.contains("seed")) cfg.seed = s["seed"].get<uint64_t>();
            if (s.contains("monitor_seed"))
                cfg.monitor_seed = s["monitor_seed"].get<uint64_t>();
            if (s.contains("victim_pool")) cfg.victim_pool_path = s["victim_pool"].get<std::string>();
            if (s.contains("hijacker_pool"))
                cfg.hijacker_pool_path = s["hijacker_pool"].get<std::string>();
            if (s.contains("symmetric_pairs")) cfg.symmetric_pairs = s["symmetric_pairs"].get<bool>();
        }
        if (j.contains("monitors")) {
            for (const auto& m : j["monitors"]) {
                MonitorSpec spec;
                spec.label = m.at("label").get<std::string>();
                spec.source = m.at("source").get<std::string>();
                if (m.contains("m")) spec.m = m["m"].get<size_t>();
                if (m.contains("clusters")) spec.clusters = m["clusters"].get<size_t>();
                if (m.contains("path")) spec.path = m["path"].get<std::string>();
                if (m.contains("observation")) spec.observation = m["observation"].get<std::string>();
                if (m.contains("n_ip")) spec.n_ip = m["n_ip"].get<uint32_t>();
                if (m.contains("ping_seed")) spec.ping_seed = m["ping_seed"].get<uint64_t>();
                cfg.monitors.push_back(std::move(spec));
            }
        }
        if (j.contains("output")) cfg.output = j["output"].get<std::string>();
        if (j.contains("jobs")) cfg.jobs = j["jobs"].get<unsigned>();
        if (j.contains("dump_decisions")) cfg.dump_decisions = j["dump_decisions"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        data_error("bad config JSON: " + std::string(e.what()));
    }
}

GraphPtr open_graph(const std::string& path, uint64_t synthetic, bool has_seed,
                    uint64_t graph_seed) {
    bgpi_graph* g = nullptr;
    if (!path.empty() && synthetic > 0)
        usage_error("give either a topology file or a synthetic size, not both");
    if (!path.empty()) {
        require_file(path);
        check(bgpi_graph_load(path.c_str(), &g));
    } else if (synthetic > 0) {
        if (!has_seed) usage_error("synthetic topology needs an explicit --graph-seed");
        check(bgpi_graph_generate(uint32_t(synthetic), graph_seed, &g));
    } else {
        usage_error("no topology given (use --graph or --synthetic)");
    }
    return GraphPtr(g, &bgpi_graph_free);
}

int cmd_simulate(const SimulateConfig& cfg) {
    if (cfg.count == 0) usage_error("scenario count must be positive");
    if (!cfg.seed.has_value())
        usage_error("simulation requires an explicit --seed (no wall-clock defaults)");
    if (cfg.output.empty()) usage_error("no output path given");
    if (cfg.prefix_mode != "exact" && cfg.prefix_mode != "sub")
        usage_error("prefix mode must be 'exact' or 'sub'");
    for (const MonitorSpec& spec : cfg.monitors)
        if (spec.source == "file") require_file(spec.path);
    if (!cfg.victim_pool_path.empty()) require_file(cfg.victim_pool_path);
    if (!cfg.hijacker_pool_path.empty()) require_file(cfg.hijacker_pool_path);

    GraphPtr graph = open_graph(cfg.graph_path, cfg.synthetic, cfg.has_graph_seed, cfg.graph_seed);

    AsnBuffer victims, hijackers;
    if (!cfg.victim_pool_path.empty())
        check(bgpi_load_asn_list(cfg.victim_pool_path.c_str(), &victims.data, &victims.len));
    if (!cfg.hijacker_pool_path.empty())
        check(bgpi_load_asn_list(cfg.hijacker_pool_path.c_str(), &hijackers.data,
                                 &hijackers.len));

    bgpi_dataset* raw = nullptr;
    check(bgpi_dataset_generate(graph.get(), cfg.count, cfg.hijack_type,
                                cfg.prefix_mode == "sub" ? 1 : 0, *cfg.seed, victims.data,
                                victims.len, hijackers.data, hijackers.len,
                                cfg.symmetric_pairs ? 1 : 0, &raw));
    DatasetPtr ds(raw, &bgpi_dataset_free);
    check(bgpi_dataset_simulate(graph.get(), ds.get(), cfg.jobs, cfg.dump_decisions ? 1 : 0));

    uint64_t monitor_seed = cfg.monitor_seed.value_or(*cfg.seed);
    for (size_t i = 0; i < cfg.monitors.size(); ++i) {
        const MonitorSpec& spec = cfg.monitors[i];
        AsnBuffer asns;
        if (spec.source == "random") {
            check(bgpi_sample_monitors_random(graph.get(), spec.m, monitor_seed + i,
                                              &asns.data, &asns.len));
        } else if (spec.source == "clustered") {
            check(bgpi_sample_monitors_clustered(graph.get(), spec.m, monitor_seed + i,
                                                 spec.clusters, &asns.data, &asns.len));
        } else if (spec.source == "file") {
            check(bgpi_load_asn_list(spec.path.c_str(), &asns.data, &asns.len));
        } else {
            usage_error("unknown monitor source '" + spec.source + "'");
        }
        if (spec.observation == "control-plane") {
            check(bgpi_dataset_observe_control_plane(graph.get(), ds.get(),
                                                     spec.label.c_str(), asns.data, asns.len));
        } else if (spec.observation == "ping") {
            uint64_t ping_seed = spec.ping_seed ? spec.ping_seed : *cfg.seed + 1000 + i;
            check(bgpi_dataset_observe_ping(graph.get(), ds.get(), spec.label.c_str(),
                                            asns.data, asns.len, spec.n_ip, -1.0, ping_seed));
        } else {
            usage_error("unknown observation '" + spec.observation + "'");
        }
    }

    std::string tmp = cfg.output == "-" ? "" : cfg.output + ".tmp";
    if (cfg.output == "-") {
        // stream through a temporary anyway so stdout sees complete output
        tmp = ".bgpimpact_stdout.tmp";
    }
    bgpi_status st = bgpi_dataset_write(ds.get(), tmp.c_str());
    if (st != BGPI_OK) {
        std::filesystem::remove(tmp);
        throw CliError{exit_code_of(st), bgpi_last_error()};
    }
    if (cfg.output == "-") {
        std::ifstream in(tmp);
        std::cout << in.rdbuf();
        std::filesystem::remove(tmp);
    } else {
        std::error_code ec;
        std::filesystem::rename(tmp, cfg.output, ec);
        if (ec) {
            std::filesystem::remove(tmp);
            data_error("cannot move output into place: " + cfg.output);
        }
    }
    return 0;
}

std::vector<double> dataset_impacts(const std::string& path) {
    require_file(path);
    bgpi_dataset* raw = nullptr;
    check(bgpi_dataset_read(path.c_str(), &raw));
    DatasetPtr ds(raw, &bgpi_dataset_free);
    size_t n = 0;
    check(bgpi_dataset_size(ds.get(), &n));
    std::vector<double> impacts(n);
    for (size_t i = 0; i < n; ++i) check(bgpi_dataset_impact(ds.get(), i, &impacts[i]));
    return impacts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BGP prefix-hijack impact simulation and estimation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bgpi_version()));

    // ---- simulate ----
    SimulateConfig sim;
    std::string sim_config_path;
    std::vector<std::string> sim_monitor_flags;
    bool sim_seed_set = false;
    uint64_t sim_seed_flag = 0;
    auto* simulate = app.add_subcommand("simulate", "Simulate hijack scenarios to JSONL");
    simulate->add_option("--config", sim_config_path, "JSON config file (flags override it)");
    simulate->add_option("--graph", sim.graph_path, "AS-relationship file (.txt or .gz)");
    simulate->add_option("--synthetic", sim.synthetic, "synthetic topology size");
    auto* gseed = simulate->add_option("--graph-seed", sim.graph_seed, "synthetic topology seed");
    simulate->add_option("--count", sim.count, "number of scenarios");
    simulate->add_option("--type", sim.hijack_type, "hijack type N (0 = origin hijack)");
    simulate->add_option("--prefix-mode", sim.prefix_mode, "exact | sub");
    auto* sseed = simulate->add_option("--seed", sim_seed_flag, "scenario seed (required)");
    uint64_t sim_monitor_seed = 0;
    auto* mseed = simulate->add_option("--monitor-seed", sim_monitor_seed,
                                       "monitor sampling seed (defaults to --seed; set it to "
                                       "share monitor sets across datasets)");
    simulate->add_option("--victim-pool", sim.victim_pool_path, "victim ASN pool file");
    simulate->add_option("--hijacker-pool", sim.hijacker_pool_path, "hijacker ASN pool file");
    simulate->add_flag("--symmetric-pairs", sim.symmetric_pairs,
                       "emit each {V,H} with its swapped twin");
    simulate->add_flag("--dump-decisions", sim.dump_decisions, "store per-AS decisions");
    simulate->add_option("--jobs", sim.jobs, "scenario-level parallelism");
    simulate->add_option("--monitors", sim_monitor_flags,
                         "monitor set spec label=random:<m> | label=clustered:<m>[:<k>] | "
                         "label=file:<path>; append :ping:<n_ip> for ping observation");
    simulate->add_option("--output", sim.output, "output JSONL path ('-' = stdout)");

    // ---- eval ----
    std::string eval_experiment, eval_dataset, eval_monitor_set, eval_estimator = "nie";
    std::string eval_model_path, eval_monitor_source = "random", eval_out = "-";
    std::vector<size_t> eval_m_grid;
    size_t eval_scenarios = 1000, eval_train = 1000, eval_test = 1000;
    uint32_t eval_type = 0, eval_ping_n_ip = 0;
    double eval_alpha = 50.0, eval_fixed_p = -1.0;
    uint64_t eval_seed = 0;
    unsigned eval_jobs = 1;
    bool eval_no_lpo = false;
    bool eval_seed_set = false;
    auto* eval = app.add_subcommand("eval", "Evaluate estimators on datasets or experiments");
    eval->add_option("--experiment", eval_experiment, "nie | lre (simulation experiment)");
    eval->add_option("--dataset", eval_dataset, "evaluate over an existing dataset");
    eval->add_option("--monitor-set", eval_monitor_set, "monitor set label in the dataset");
    eval->add_option("--estimator", eval_estimator, "nie | lre (dataset mode)");
    eval->add_option("--model", eval_model_path, "LRE model JSON (dataset mode)");
    eval->add_option("--graph", sim.graph_path, "AS-relationship file")->excludes("--dataset");
    eval->add_option("--synthetic", sim.synthetic, "synthetic topology size");
    eval->add_option("--graph-seed", sim.graph_seed, "synthetic topology seed");
    eval->add_option("--scenarios", eval_scenarios, "scenario count (nie experiment)");
    eval->add_option("--train", eval_train, "training scenarios (lre experiment)");
    eval->add_option("--test", eval_test, "test scenarios (lre experiment)");
    eval->add_option("--type", eval_type, "hijack type");
    eval->add_option("--monitor-source", eval_monitor_source,
                     "random | clustered[:k] | file:<path>");
    eval->add_option("--m-grid", eval_m_grid, "monitor counts to sweep")->delimiter(',');
    eval->add_option("--alpha", eval_alpha, "ridge regularization strength");
    eval->add_option("--ping-n-ip", eval_ping_n_ip, "observe via pings with this many IPs/AS");
    eval->add_option("--fixed-p", eval_fixed_p, "override the ping failure table");
    auto* eseed = eval->add_option("--seed", eval_seed, "experiment seed (required)");
    eval->add_option("--jobs", eval_jobs, "scenario-level parallelism");
    eval->add_flag("--no-leave-pair-out", eval_no_lpo, "allow {V,H} overlap across splits");
    eval->add_option("--out", eval_out, "output CSV path ('-' = stdout)");

    // ---- theory ----
    std::string theory_dataset, theory_out = "-";
    size_t theory_uniform = 0, theory_m = 100;
    double theory_p = 0.0;
    std::vector<size_t> theory_m_grid;
    std::vector<double> theory_p_grid;
    auto* theory = app.add_subcommand("theory", "Closed-form bias/RMSE curves as CSV");
    theory->add_option("--dataset", theory_dataset, "impact samples from a dataset JSONL");
    theory->add_option("--uniform", theory_uniform,
                       "use N evenly spaced impact samples on [0,1] instead");
    theory->add_option("--m-grid", theory_m_grid, "monitor-count rows")->delimiter(',');
    theory->add_option("--p", theory_p, "failure probability for --m-grid curves");
    theory->add_option("--p-grid", theory_p_grid, "failure-probability rows")->delimiter(',');
    theory->add_option("--m", theory_m, "monitor count for --p-grid curves");
    theory->add_option("--out", theory_out, "output CSV path ('-' = stdout)");

    // ---- fit-lre ----
    std::string fit_dataset, fit_label, fit_out;
    double fit_alpha = 50.0;
    auto* fit = app.add_subcommand("fit-lre", "Fit the ridge LRE from a dataset");
    fit->add_option("--dataset", fit_dataset, "training dataset JSONL")->required();
    fit->add_option("--monitor-set", fit_label, "monitor set label")->required();
    fit->add_option("--alpha", fit_alpha, "ridge regularization strength");
    fit->add_option("--out", fit_out, "model JSON output path")->required();

    // ---- predict ----
    std::string pred_dataset, pred_label, pred_model, pred_out = "-";
    auto* predict = app.add_subcommand("predict", "Apply a fitted LRE to a dataset");
    predict->add_option("--model", pred_model, "LRE model JSON")->required();
    predict->add_option("--dataset", pred_dataset, "dataset JSONL")->required();
    predict->add_option("--monitor-set", pred_label, "monitor set label")->required();
    predict->add_option("--out", pred_out, "output CSV path ('-' = stdout)");

    // ---- ping-targets ----
    std::string pt_hitlist, pt_out = "-";
    std::vector<std::string> pt_pfx2as;
    double pt_min_score = 0.9, pt_consistency = 0.5;
    size_t pt_cap = 10;
    auto* ping_targets =
        app.add_subcommand("ping-targets", "Compile per-AS pingable IP targets");
    ping_targets->add_option("--hitlist", pt_hitlist, "hitlist file '<ip> <score>'")->required();
    ping_targets->add_option("--pfx2as", pt_pfx2as, "pfx2as snapshot file (repeatable)")
        ->required();
    ping_targets->add_option("--min-score", pt_min_score, "minimum confidence score");
    ping_targets->add_option("--per-as-cap", pt_cap, "IPs kept per AS");
    ping_targets->add_option("--min-consistency", pt_consistency,
                             "snapshot consistency threshold (strictly-more-than)");
    ping_targets->add_option("--out", pt_out, "output JSONL path ('-' = stdout)");

    // ---- classify ----
    std::string cls_kind, cls_records, cls_event, cls_out = "-";
    std::vector<std::string> cls_pfx2as;
    double cls_consistency = 0.5;
    bool cls_origin_only = false;
    auto* classify =
        app.add_subcommand("classify", "Classify BGP-path or traceroute records for an event");
    classify->add_option("--kind", cls_kind, "bgp | traceroute")->required();
    classify->add_option("--records", cls_records, "records JSONL")->required();
    classify->add_option("--event", cls_event, "event spec JSON file")->required();
    classify->add_option("--pfx2as", cls_pfx2as, "pfx2as snapshot (traceroute mode)");
    classify->add_option("--min-consistency", cls_consistency,
                         "snapshot consistency threshold");
    classify->add_flag("--origin-only", cls_origin_only,
                       "BGP mode: consult only the origin ASN");
    classify->add_option("--out", cls_out, "output JSON path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    sim_seed_set = sseed->count() > 0;
    eval_seed_set = eseed->count() > 0;

    try {
        if (simulate->parsed()) {
            SimulateConfig cfg;
            if (!sim_config_path.empty()) load_simulate_config(sim_config_path, cfg);
            // flags override the config file
            if (!sim.graph_path.empty()) cfg.graph_path = sim.graph_path;
            if (sim.synthetic > 0) cfg.synthetic = sim.synthetic;
            if (gseed->count() > 0) {
                cfg.graph_seed = sim.graph_seed;
                cfg.has_graph_seed = true;
            }
            if (sim.count > 0) cfg.count = sim.count;
            if (simulate->count("--type") > 0) cfg.hijack_type = sim.hijack_type;
            if (simulate->count("--prefix-mode") > 0) cfg.prefix_mode = sim.prefix_mode;
            if (sim_seed_set) cfg.seed = sim_seed_flag;
            if (mseed->count() > 0) cfg.monitor_seed = sim_monitor_seed;
            if (!sim.victim_pool_path.empty()) cfg.victim_pool_path = sim.victim_pool_path;
            if (!sim.hijacker_pool_path.empty())
                cfg.hijacker_pool_path = sim.hijacker_pool_path;
            if (sim.symmetric_pairs) cfg.symmetric_pairs = true;
            if (sim.dump_decisions) cfg.dump_decisions = true;
            if (simulate->count("--jobs") > 0) cfg.jobs = sim.jobs;
            if (!sim_monitor_flags.empty()) {
                cfg.monitors.clear();
                for (const std::string& text : sim_monitor_flags)
                    cfg.monitors.push_back(parse_monitor_spec(text));
            }
            if (!sim.output.empty()) cfg.output = sim.output;
            return cmd_simulate(cfg);
        }

        if (eval->parsed()) {
            if (!eval_dataset.empty()) {
                require_file(eval_dataset);
                if (eval_monitor_set.empty()) usage_error("--monitor-set is required");
                bgpi_dataset* raw = nullptr;
                check(bgpi_dataset_read(eval_dataset.c_str(), &raw));
                DatasetPtr ds(raw, &bgpi_dataset_free);
                char* csv = nullptr;
                if (eval_estimator == "nie") {
                    check(bgpi_eval_nie(ds.get(), eval_monitor_set.c_str(), &csv));
                } else if (eval_estimator == "lre") {
                    if (eval_model_path.empty()) usage_error("--model is required for lre");
                    require_file(eval_model_path);
                    bgpi_lre_model* m = nullptr;
                    check(bgpi_lre_model_load(eval_model_path.c_str(), &m));
                    ModelPtr model(m, &bgpi_lre_model_free);
                    check(bgpi_eval_lre(model.get(), ds.get(), eval_monitor_set.c_str(), &csv));
                } else {
                    usage_error("unknown estimator '" + eval_estimator + "'");
                }
                write_output(eval_out, take_string(csv));
                return 0;
            }
            if (eval_experiment.empty())
                usage_error("give either --dataset or --experiment nie|lre");
            if (!eval_seed_set)
                usage_error("experiments require an explicit --seed (no wall-clock defaults)");
            if (eval_m_grid.empty()) usage_error("--m-grid is required");
            if (eval_monitor_source.rfind("file:", 0) == 0)
                require_file(eval_monitor_source.substr(5));
            GraphPtr graph =
                open_graph(sim.graph_path, sim.synthetic,
                           app.get_subcommand("eval")->count("--graph-seed") > 0, sim.graph_seed);
            char* csv = nullptr;
            if (eval_experiment == "nie") {
                check(bgpi_run_nie_experiment(graph.get(), eval_scenarios, eval_type,
                                              eval_monitor_source.c_str(), eval_m_grid.data(),
                                              eval_m_grid.size(), eval_seed, eval_jobs,
                                              eval_ping_n_ip, eval_fixed_p, &csv));
            } else if (eval_experiment == "lre") {
                check(bgpi_run_lre_experiment(graph.get(), eval_train, eval_test, eval_type,
                                              eval_monitor_source.c_str(), eval_alpha,
                                              eval_m_grid.data(), eval_m_grid.size(), eval_seed,
                                              eval_jobs, eval_no_lpo ? 0 : 1, &csv));
            } else {
                usage_error("unknown experiment '" + eval_experiment + "'");
            }
            write_output(eval_out, take_string(csv));
            return 0;
        }

        if (theory->parsed()) {
            std::vector<double> impacts;
            if (!theory_dataset.empty()) {
                impacts = dataset_impacts(theory_dataset);
            } else if (theory_uniform > 0) {
                // midpoint grid: an exact, noise-free stand-in for U[0,1]
                impacts.reserve(theory_uniform);
                for (size_t i = 0; i < theory_uniform; ++i)
                    impacts.push_back((double(i) + 0.5) / double(theory_uniform));
            } else {
                usage_error("give --dataset or --uniform N");
            }
            char* csv = nullptr;
            if (!theory_m_grid.empty()) {
                check(bgpi_theory_curve_m(impacts.data(), impacts.size(), theory_m_grid.data(),
                                          theory_m_grid.size(), theory_p, &csv));
            } else if (!theory_p_grid.empty()) {
                check(bgpi_theory_curve_p(impacts.data(), impacts.size(), theory_p_grid.data(),
                                          theory_p_grid.size(), theory_m, &csv));
            } else {
                usage_error("give --m-grid or --p-grid");
            }
            write_output(theory_out, take_string(csv));
            return 0;
        }

        if (fit->parsed()) {
            require_file(fit_dataset);
            bgpi_dataset* raw = nullptr;
            check(bgpi_dataset_read(fit_dataset.c_str(), &raw));
            DatasetPtr ds(raw, &bgpi_dataset_free);
            bgpi_lre_model* m = nullptr;
            check(bgpi_fit_lre(ds.get(), fit_label.c_str(), fit_alpha, &m));
            ModelPtr model(m, &bgpi_lre_model_free);
            std::string tmp = fit_out + ".tmp";
            bgpi_status st = bgpi_lre_model_save(model.get(), tmp.c_str());
            if (st != BGPI_OK) {
                std::filesystem::remove(tmp);
                throw CliError{exit_code_of(st), bgpi_last_error()};
            }
            std::error_code ec;
            std::filesystem::rename(tmp, fit_out, ec);
            if (ec) {
                std::filesystem::remove(tmp);
                data_error("cannot move output into place: " + fit_out);
            }
            return 0;
        }

        if (predict->parsed()) {
            require_file(pred_model);
            require_file(pred_dataset);
            bgpi_lre_model* m = nullptr;
            check(bgpi_lre_model_load(pred_model.c_str(), &m));
            ModelPtr model(m, &bgpi_lre_model_free);
            bgpi_dataset* raw = nullptr;
            check(bgpi_dataset_read(pred_dataset.c_str(), &raw));
            DatasetPtr ds(raw, &bgpi_dataset_free);
            char* csv = nullptr;
            check(bgpi_lre_predict(model.get(), ds.get(), pred_label.c_str(), &csv));
            write_output(pred_out, take_string(csv));
            return 0;
        }

        if (ping_targets->parsed()) {
            require_file(pt_hitlist);
            std::vector<const char*> paths;
            for (const std::string& p : pt_pfx2as) {
                require_file(p);
                paths.push_back(p.c_str());
            }
            bgpi_pfx2as* raw = nullptr;
            check(bgpi_pfx2as_load(paths.data(), paths.size(), pt_consistency, &raw));
            MapPtr map(raw, &bgpi_pfx2as_free);
            char* jsonl = nullptr;
            check(bgpi_build_ping_targets(pt_hitlist.c_str(), map.get(), pt_min_score, pt_cap,
                                          &jsonl));
            write_output(pt_out, take_string(jsonl));
            return 0;
        }

        if (classify->parsed()) {
            require_file(cls_records);
            std::string event_json = read_file(cls_event);
            char* result = nullptr;
            if (cls_kind == "bgp") {
                check(bgpi_classify_bgp_paths(cls_records.c_str(), event_json.c_str(),
                                              cls_origin_only ? 1 : 0, &result));
            } else if (cls_kind == "traceroute") {
                if (cls_pfx2as.empty())
                    usage_error("traceroute classification needs --pfx2as");
                std::vector<const char*> paths;
                for (const std::string& p : cls_pfx2as) {
                    require_file(p);
                    paths.push_back(p.c_str());
                }
                bgpi_pfx2as* raw = nullptr;
                check(bgpi_pfx2as_load(paths.data(), paths.size(), cls_consistency, &raw));
                MapPtr map(raw, &bgpi_pfx2as_free);
                check(bgpi_classify_traceroutes(cls_records.c_str(), event_json.c_str(),
                                                map.get(), &result));
            } else {
                usage_error("unknown --kind '" + cls_kind + "' (bgp | traceroute)");
            }
            write_output(cls_out, take_string(result));
            return 0;
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
