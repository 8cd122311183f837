#include "bgpimpact.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "bgpimpact/error.hpp"
#include "bgpimpact/estimators.hpp"
#include "bgpimpact/evalkit.hpp"
#include "bgpimpact/ingest.hpp"
#include "bgpimpact/monitors.hpp"
#include "bgpimpact/rng.hpp"
#include "bgpimpact/sim.hpp"
#include "bgpimpact/theory.hpp"
#include "bgpimpact/topology.hpp"
#include "json.hpp"

using namespace bgpimpact;

struct bgpi_graph {
    AsGraph graph;
};

struct bgpi_dataset {
    std::vector<ScenarioRecord> records;
    // per-record decisions, cached by simulate for later observation calls
    std::vector<std::vector<Decision>> decisions;
};

struct bgpi_lre_model {
    LreModel model;
};

struct bgpi_pfx2as {
    PrefixToAsMap map;
};

namespace {

thread_local std::string g_last_error = "no error";

bgpi_status status_of(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Argument:
            return BGPI_ERR_ARGUMENT;
        case ErrorKind::Parse:
        case ErrorKind::Data:
            return BGPI_ERR_DATA;
        case ErrorKind::Internal:
            return BGPI_ERR_INTERNAL;
    }
    return BGPI_ERR_INTERNAL;
}

template <typename Fn>
bgpi_status wrap(Fn&& fn) {
    try {
        fn();
        return BGPI_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BGPI_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BGPI_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw InternalError("out of memory");
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename T>
void require(const T* p, const char* what) {
    if (!p) throw ArgumentError(std::string("null ") + what);
}

std::vector<AsId> to_asns(const uint32_t* data, size_t len, const char* what) {
    if (len > 0 && !data) throw ArgumentError(std::string("null ") + what);
    return std::vector<AsId>(data, data + len);
}

MonitorSet monitor_set_from(const uint32_t* monitors, size_t n, const char* label) {
    MonitorSet set;
    set.label = label ? label : "monitors";
    set.members = to_asns(monitors, n, "monitor array");
    return set;
}

MonitorSource parse_monitor_source(const char* spec) {
    require(spec, "monitor source");
    std::string s = spec;
    if (s == "random") return MonitorSource::random();
    if (s == "clustered") return MonitorSource::clustered();
    if (s.rfind("clustered:", 0) == 0)
        return MonitorSource::clustered(std::stoul(s.substr(10)));
    if (s.rfind("file:", 0) == 0)
        return MonitorSource::fixed_set(load_monitor_set_file(s.substr(5), "file"));
    throw ArgumentError("unknown monitor source '" + s + "' (random|clustered[:k]|file:<path>)");
}

PingModel make_ping_model(uint32_t n_ip, double fixed_p, uint64_t seed) {
    if (n_ip == 0) throw ArgumentError("n_ip must be positive");
    PingModel model;
    if (fixed_p >= 0.0) {
        model = PingModel::with_fixed_p(fixed_p, seed, n_ip);
    } else {
        model.n_ip = n_ip;
        model.seed = seed;
    }
    model.validate();
    return model;
}

const std::vector<Decision>& record_decisions(const bgpi_graph* g, const bgpi_dataset* ds,
                                              size_t index,
                                              std::vector<Decision>& scratch) {
    if (index < ds->decisions.size() && !ds->decisions[index].empty())
        return ds->decisions[index];
    const ScenarioRecord& rec = ds->records[index];
    if (rec.decisions.empty())
        throw DataError("record " + std::to_string(rec.id) +
                        " has no decisions; run bgpi_dataset_simulate first or load a dataset "
                        "written with decision dumps");
    scratch.assign(g->graph.node_count(), Decision::Unreachable);
    for (const auto& [as, code] : rec.decisions) {
        Decision d = code == 'V' ? Decision::Victim
                     : code == 'H' ? Decision::Hijacker
                                   : Decision::Unreachable;
        scratch[g->graph.index_of(as)] = d;
    }
    return scratch;
}

RoutingOutcome outcome_view(const ScenarioRecord& rec, const std::vector<Decision>& decisions) {
    RoutingOutcome out;
    out.scenario = rec.scenario;
    out.decisions = decisions;
    out.impact = rec.impact;
    out.infected_count = rec.infected_count;
    out.reachable_count = rec.reachable_count;
    return out;
}

std::string one_report_csv(EvalReport r, const char* estimator, const std::string& label,
                           size_t m) {
    r.estimator = estimator;
    r.monitor_set = label;
    r.m = m;
    return reports_to_csv({r});
}

}  // namespace

extern "C" {

const char* bgpi_last_error(void) { return g_last_error.c_str(); }

const char* bgpi_version(void) { return "0.1.0"; }

void bgpi_string_free(char* s) { std::free(s); }

void bgpi_buffer_free(void* p) { std::free(p); }

/* ---------------- topology ---------------- */

bgpi_status bgpi_graph_load(const char* path, bgpi_graph** out) {
    return wrap([&] {
        require(path, "path");
        require(out, "output");
        *out = new bgpi_graph{load_as_rel(path)};
    });
}

bgpi_status bgpi_graph_parse(const char* text, bgpi_graph** out) {
    return wrap([&] {
        require(text, "text");
        require(out, "output");
        *out = new bgpi_graph{parse_as_rel(std::string(text))};
    });
}

bgpi_status bgpi_graph_generate(uint32_t n_ases, uint64_t seed, bgpi_graph** out) {
    return wrap([&] {
        require(out, "output");
        *out = new bgpi_graph{gen_synthetic_topology(n_ases, seed)};
    });
}

bgpi_status bgpi_graph_node_count(const bgpi_graph* g, size_t* out) {
    return wrap([&] {
        require(g, "graph");
        require(out, "output");
        *out = g->graph.node_count();
    });
}

bgpi_status bgpi_graph_edge_count(const bgpi_graph* g, size_t* out) {
    return wrap([&] {
        require(g, "graph");
        require(out, "output");
        *out = g->graph.edge_count();
    });
}

bgpi_status bgpi_graph_validate(const bgpi_graph* g, char** report_json) {
    return wrap([&] {
        require(g, "graph");
        require(report_json, "output");
        ValidationReport report = validate(g->graph);
        nlohmann::ordered_json j;
        j["violations"] = report.violations;
        j["components"] = report.component_count;
        j["isolated"] = report.isolated_count;
        *report_json = dup_string(j.dump());
    });
}

void bgpi_graph_free(bgpi_graph* g) { delete g; }

bgpi_status bgpi_load_asn_list(const char* path, uint32_t** out, size_t* out_len) {
    return wrap([&] {
        require(path, "path");
        require(out, "output");
        require(out_len, "output length");
        MonitorSet set = load_monitor_set_file(path, "list");
        auto* buf = static_cast<uint32_t*>(std::malloc(sizeof(uint32_t) * set.size()));
        if (!buf && set.size()) throw InternalError("out of memory");
        std::copy(set.members.begin(), set.members.end(), buf);
        *out = buf;
        *out_len = set.size();
    });
}

bgpi_status bgpi_sample_monitors_random(const bgpi_graph* g, size_t m, uint64_t seed,
                                        uint32_t** out, size_t* out_len) {
    return wrap([&] {
        require(g, "graph");
        require(out, "output");
        require(out_len, "output length");
        MonitorSet set = sample_random_monitors(g->graph, m, seed);
        auto* buf = static_cast<uint32_t*>(std::malloc(sizeof(uint32_t) * set.size()));
        if (!buf && set.size()) throw InternalError("out of memory");
        std::copy(set.members.begin(), set.members.end(), buf);
        *out = buf;
        *out_len = set.size();
    });
}

bgpi_status bgpi_sample_monitors_clustered(const bgpi_graph* g, size_t m, uint64_t seed,
                                           size_t n_clusters, uint32_t** out,
                                           size_t* out_len) {
    return wrap([&] {
        require(g, "graph");
        require(out, "output");
        require(out_len, "output length");
        MonitorSet set = sample_clustered_monitors(g->graph, m, seed, n_clusters);
        auto* buf = static_cast<uint32_t*>(std::malloc(sizeof(uint32_t) * set.size()));
        if (!buf && set.size()) throw InternalError("out of memory");
        std::copy(set.members.begin(), set.members.end(), buf);
        *out = buf;
        *out_len = set.size();
    });
}

/* ---------------- scenarios and datasets ---------------- */

bgpi_status bgpi_dataset_generate(const bgpi_graph* g, size_t count, uint32_t hijack_type,
                                  int subprefix, uint64_t seed, const uint32_t* victim_pool,
                                  size_t victim_pool_len, const uint32_t* hijacker_pool,
                                  size_t hijacker_pool_len, int symmetric_pairs,
                                  bgpi_dataset** out) {
    return wrap([&] {
        require(g, "graph");
        require(out, "output");
        ScenarioGenConfig cfg;
        cfg.count = count;
        cfg.hijack_type = hijack_type;
        cfg.prefix_mode = subprefix ? PrefixMode::SubPrefix : PrefixMode::ExactPrefix;
        cfg.seed = seed;
        cfg.victim_pool = to_asns(victim_pool, victim_pool_len, "victim pool");
        cfg.hijacker_pool = to_asns(hijacker_pool, hijacker_pool_len, "hijacker pool");
        cfg.symmetric_pairs = symmetric_pairs != 0;
        std::vector<HijackScenario> scenarios = generate_scenarios(g->graph, cfg);
        auto ds = std::make_unique<bgpi_dataset>();
        ds->records.reserve(scenarios.size());
        for (size_t i = 0; i < scenarios.size(); ++i) {
            ScenarioRecord rec;
            rec.id = i;
            rec.scenario = scenarios[i];
            ds->records.push_back(std::move(rec));
        }
        *out = ds.release();
    });
}

bgpi_status bgpi_dataset_simulate(const bgpi_graph* g, bgpi_dataset* ds, unsigned jobs,
                                  int keep_decisions) {
    return wrap([&] {
        require(g, "graph");
        require(ds, "dataset");
        std::vector<HijackScenario> scenarios;
        scenarios.reserve(ds->records.size());
        for (const ScenarioRecord& rec : ds->records) scenarios.push_back(rec.scenario);
        std::vector<RoutingOutcome> outcomes =
            batch_simulate(g->graph, scenarios, jobs, /*keep_routes=*/false);
        ds->decisions.clear();
        ds->decisions.reserve(outcomes.size());
        for (size_t i = 0; i < outcomes.size(); ++i) {
            ScenarioRecord& rec = ds->records[i];
            rec.impact = outcomes[i].impact;
            rec.infected_count = outcomes[i].infected_count;
            rec.reachable_count = outcomes[i].reachable_count;
            rec.decisions.clear();
            if (keep_decisions) {
                for (size_t idx = 0; idx < outcomes[i].decisions.size(); ++idx) {
                    char code = outcomes[i].decisions[idx] == Decision::Victim     ? 'V'
                                : outcomes[i].decisions[idx] == Decision::Hijacker ? 'H'
                                                                                   : 'U';
                    rec.decisions[g->graph.as_at(uint32_t(idx))] = code;
                }
            }
            ds->decisions.push_back(std::move(outcomes[i].decisions));
        }
    });
}

bgpi_status bgpi_dataset_observe_control_plane(const bgpi_graph* g, bgpi_dataset* ds,
                                               const char* label, const uint32_t* monitors,
                                               size_t n_monitors) {
    return wrap([&] {
        require(g, "graph");
        require(ds, "dataset");
        require(label, "label");
        MonitorSet set = monitor_set_from(monitors, n_monitors, label);
        for (size_t i = 0; i < ds->records.size(); ++i) {
            std::vector<Decision> scratch;
            const auto& decisions = record_decisions(g, ds, i, scratch);
            MeasurementVector mv =
                observe_control_plane(g->graph, outcome_view(ds->records[i], decisions), set);
            ds->records[i].monitor_sets[label] =
                MeasurementRecord{set.members, mv.values, mv.corrupted};
        }
    });
}

bgpi_status bgpi_dataset_observe_ping(const bgpi_graph* g, bgpi_dataset* ds, const char* label,
                                      const uint32_t* monitors, size_t n_monitors,
                                      uint32_t n_ip, double fixed_p, uint64_t seed) {
    return wrap([&] {
        require(g, "graph");
        require(ds, "dataset");
        require(label, "label");
        MonitorSet set = monitor_set_from(monitors, n_monitors, label);
        PingModel base = make_ping_model(n_ip, fixed_p, seed);
        for (size_t i = 0; i < ds->records.size(); ++i) {
            std::vector<Decision> scratch;
            const auto& decisions = record_decisions(g, ds, i, scratch);
            PingModel model = base;
            model.seed = derive_seed(seed, 0x6f627370ULL, i);
            MeasurementVector mv =
                observe_ping(g->graph, outcome_view(ds->records[i], decisions), set, model);
            ds->records[i].monitor_sets[label] =
                MeasurementRecord{set.members, mv.values, mv.corrupted};
        }
    });
}

bgpi_status bgpi_dataset_write(const bgpi_dataset* ds, const char* path) {
    return wrap([&] {
        require(ds, "dataset");
        require(path, "path");
        std::ofstream out(path);
        if (!out) throw DataError(std::string("cannot write ") + path);
        write_dataset(out, ds->records);
        if (!out.good()) throw DataError(std::string("write failed for ") + path);
    });
}

bgpi_status bgpi_dataset_read(const char* path, bgpi_dataset** out) {
    return wrap([&] {
        require(path, "path");
        require(out, "output");
        std::ifstream in(path);
        if (!in) throw DataError(std::string("cannot open ") + path);
        auto ds = std::make_unique<bgpi_dataset>();
        ds->records = read_dataset(in);
        *out = ds.release();
    });
}

bgpi_status bgpi_dataset_size(const bgpi_dataset* ds, size_t* out) {
    return wrap([&] {
        require(ds, "dataset");
        require(out, "output");
        *out = ds->records.size();
    });
}

bgpi_status bgpi_dataset_impact(const bgpi_dataset* ds, size_t index, double* out) {
    return wrap([&] {
        require(ds, "dataset");
        require(out, "output");
        if (index >= ds->records.size()) throw ArgumentError("record index out of range");
        *out = ds->records[index].impact;
    });
}

void bgpi_dataset_free(bgpi_dataset* ds) { delete ds; }

/* ---------------- estimators ---------------- */

bgpi_status bgpi_eval_nie(const bgpi_dataset* ds, const char* label, char** csv) {
    return wrap([&] {
        require(ds, "dataset");
        require(label, "label");
        require(csv, "output");
        DatasetView view = extract_observations(ds->records, label);
        std::vector<double> estimates;
        estimates.reserve(view.observations.size());
        for (const auto& row : view.observations) {
            MeasurementVector mv;
            mv.values = row;
            estimates.push_back(nie(mv).value);
        }
        EvalReport r = evaluate(estimates, view.impacts);
        *csv = dup_string(one_report_csv(r, "nie", label, view.monitor_asns.size()));
    });
}

bgpi_status bgpi_fit_lre(const bgpi_dataset* train, const char* label, double alpha,
                         bgpi_lre_model** out) {
    return wrap([&] {
        require(train, "dataset");
        require(label, "label");
        require(out, "output");
        DatasetView view = extract_observations(train->records, label);
        *out = new bgpi_lre_model{
            fit_lre(view.observations, view.impacts, alpha, view.monitor_asns)};
    });
}

bgpi_status bgpi_lre_model_save(const bgpi_lre_model* model, const char* path) {
    return wrap([&] {
        require(model, "model");
        require(path, "path");
        std::ofstream out(path);
        if (!out) throw DataError(std::string("cannot write ") + path);
        out << lre_model_to_json(model->model) << '\n';
    });
}

bgpi_status bgpi_lre_model_load(const char* path, bgpi_lre_model** out) {
    return wrap([&] {
        require(path, "path");
        require(out, "output");
        std::ifstream in(path);
        if (!in) throw DataError(std::string("cannot open ") + path);
        std::stringstream buf;
        buf << in.rdbuf();
        *out = new bgpi_lre_model{lre_model_from_json(buf.str())};
    });
}

bgpi_status bgpi_lre_predict(const bgpi_lre_model* model, const bgpi_dataset* ds,
                             const char* label, char** csv) {
    return wrap([&] {
        require(model, "model");
        require(ds, "dataset");
        require(label, "label");
        require(csv, "output");
        DatasetView view = extract_observations(ds->records, label);
        if (view.monitor_asns != model->model.monitor_asns)
            throw DataError("dataset monitor set does not match the model's monitors");
        std::ostringstream out;
        out << "id,impact,estimate\n";
        char buf[96];
        for (size_t i = 0; i < view.observations.size(); ++i) {
            MeasurementVector mv;
            mv.values = view.observations[i];
            double est = predict_lre(model->model, mv).value;
            std::snprintf(buf, sizeof(buf), "%llu,%.8g,%.8g",
                          static_cast<unsigned long long>(ds->records[i].id), view.impacts[i],
                          est);
            out << buf << '\n';
        }
        *csv = dup_string(out.str());
    });
}

bgpi_status bgpi_eval_lre(const bgpi_lre_model* model, const bgpi_dataset* ds,
                          const char* label, char** csv) {
    return wrap([&] {
        require(model, "model");
        require(ds, "dataset");
        require(label, "label");
        require(csv, "output");
        DatasetView view = extract_observations(ds->records, label);
        if (view.monitor_asns != model->model.monitor_asns)
            throw DataError("dataset monitor set does not match the model's monitors");
        std::vector<double> estimates;
        estimates.reserve(view.observations.size());
        for (const auto& row : view.observations) {
            MeasurementVector mv;
            mv.values = row;
            estimates.push_back(predict_lre(model->model, mv).value);
        }
        EvalReport r = evaluate(estimates, view.impacts);
        *csv = dup_string(one_report_csv(r, "lre", label, view.monitor_asns.size()));
    });
}

void bgpi_lre_model_free(bgpi_lre_model* model) { delete model; }

/* ---------------- experiments ---------------- */

bgpi_status bgpi_run_nie_experiment(const bgpi_graph* g, size_t n_scenarios,
                                    uint32_t hijack_type, const char* monitor_source,
                                    const size_t* m_grid, size_t m_grid_len, uint64_t seed,
                                    unsigned jobs, uint32_t ping_n_ip, double fixed_p,
                                    char** csv) {
    return wrap([&] {
        require(g, "graph");
        require(csv, "output");
        if (m_grid_len > 0 && !m_grid) throw ArgumentError("null M grid");
        NieExperimentConfig cfg;
        cfg.n_scenarios = n_scenarios;
        cfg.hijack_type = hijack_type;
        cfg.monitors = parse_monitor_source(monitor_source);
        cfg.m_grid.assign(m_grid, m_grid + m_grid_len);
        cfg.seed = seed;
        cfg.jobs = jobs;
        if (ping_n_ip > 0) cfg.ping = make_ping_model(ping_n_ip, fixed_p, seed);
        *csv = dup_string(reports_to_csv(run_nie_experiment(g->graph, cfg)));
    });
}

bgpi_status bgpi_run_lre_experiment(const bgpi_graph* g, size_t n_train, size_t n_test,
                                    uint32_t hijack_type, const char* monitor_source,
                                    double alpha, const size_t* m_grid, size_t m_grid_len,
                                    uint64_t seed, unsigned jobs, int leave_pair_out,
                                    char** csv) {
    return wrap([&] {
        require(g, "graph");
        require(csv, "output");
        if (m_grid_len > 0 && !m_grid) throw ArgumentError("null M grid");
        LreExperimentConfig cfg;
        cfg.n_train = n_train;
        cfg.n_test = n_test;
        cfg.hijack_type = hijack_type;
        cfg.monitors = parse_monitor_source(monitor_source);
        cfg.alpha = alpha;
        cfg.m_grid.assign(m_grid, m_grid + m_grid_len);
        cfg.seed = seed;
        cfg.jobs = jobs;
        cfg.leave_pair_out = leave_pair_out != 0;
        std::vector<EvalReport> reports;
        for (const LreExperimentRow& row : run_lre_experiment(g->graph, cfg)) {
            reports.push_back(row.lre);
            reports.push_back(row.nie);
        }
        *csv = dup_string(reports_to_csv(reports));
    });
}

/* ---------------- closed-form accuracy curves ---------------- */

bgpi_status bgpi_theory_curve_m(const double* impacts, size_t n_impacts, const size_t* m_grid,
                                size_t m_grid_len, double p, char** csv) {
    return wrap([&] {
        require(csv, "output");
        if (n_impacts > 0 && !impacts) throw ArgumentError("null impacts");
        if (m_grid_len > 0 && !m_grid) throw ArgumentError("null M grid");
        theory::ImpactSamples samples =
            theory::make_samples(std::vector<double>(impacts, impacts + n_impacts));
        std::ostringstream out;
        out << "M,rmse_nie,bias,rmse_with_failures,rmse_floor\n";
        char buf[160];
        for (size_t i = 0; i < m_grid_len; ++i) {
            size_t m = m_grid[i];
            std::snprintf(buf, sizeof(buf), "%zu,%.8g,%.8g,%.8g,%.8g", m,
                          theory::rmse_nie_random(m, samples),
                          theory::bias_with_failures(p, samples),
                          theory::rmse_with_failures(m, p, samples),
                          theory::rmse_floor(p, samples));
            out << buf << '\n';
        }
        *csv = dup_string(out.str());
    });
}

bgpi_status bgpi_theory_curve_p(const double* impacts, size_t n_impacts, const double* p_grid,
                                size_t p_grid_len, size_t m, char** csv) {
    return wrap([&] {
        require(csv, "output");
        if (n_impacts > 0 && !impacts) throw ArgumentError("null impacts");
        if (p_grid_len > 0 && !p_grid) throw ArgumentError("null p grid");
        theory::ImpactSamples samples =
            theory::make_samples(std::vector<double>(impacts, impacts + n_impacts));
        std::ostringstream out;
        out << "p,rmse_nie,bias,rmse_with_failures,rmse_floor\n";
        char buf[160];
        for (size_t i = 0; i < p_grid_len; ++i) {
            double p = p_grid[i];
            std::snprintf(buf, sizeof(buf), "%.8g,%.8g,%.8g,%.8g,%.8g", p,
                          theory::rmse_nie_random(m, samples),
                          theory::bias_with_failures(p, samples),
                          theory::rmse_with_failures(m, p, samples),
                          theory::rmse_floor(p, samples));
            out << buf << '\n';
        }
        *csv = dup_string(out.str());
    });
}

/* ---------------- measurement ingestion ---------------- */

bgpi_status bgpi_pfx2as_load(const char* const* paths, size_t n_paths, double min_consistency,
                             bgpi_pfx2as** out) {
    return wrap([&] {
        require(out, "output");
        if (n_paths == 0 || !paths) throw ArgumentError("need at least one pfx2as path");
        std::vector<PrefixToAsMap> snapshots;
        snapshots.reserve(n_paths);
        for (size_t i = 0; i < n_paths; ++i) {
            require(paths[i], "path");
            snapshots.push_back(load_pfx2as(paths[i]));
        }
        if (snapshots.size() == 1)
            *out = new bgpi_pfx2as{std::move(snapshots[0])};
        else
            *out = new bgpi_pfx2as{merge_pfx2as_snapshots(snapshots, min_consistency)};
    });
}

bgpi_status bgpi_pfx2as_lookup(const bgpi_pfx2as* map, const char* ip, char** json) {
    return wrap([&] {
        require(map, "map");
        require(ip, "ip");
        require(json, "output");
        nlohmann::json j = map->map.lookup(parse_ipv4(ip));
        *json = dup_string(j.dump());
    });
}

void bgpi_pfx2as_free(bgpi_pfx2as* map) { delete map; }

bgpi_status bgpi_build_ping_targets(const char* hitlist_path, const bgpi_pfx2as* map,
                                    double min_score, size_t per_as_cap, char** jsonl) {
    return wrap([&] {
        require(hitlist_path, "hitlist path");
        require(map, "map");
        require(jsonl, "output");
        std::ifstream in(hitlist_path);
        if (!in) throw DataError(std::string("cannot open ") + hitlist_path);
        PingTargetList list = build_ping_targets(in, map->map, min_score, per_as_cap);
        *jsonl = dup_string(ping_targets_to_jsonl(list));
    });
}

bgpi_status bgpi_classify_bgp_paths(const char* records_path, const char* event_json,
                                    int origin_only, char** result_json) {
    return wrap([&] {
        require(records_path, "records path");
        require(event_json, "event");
        require(result_json, "output");
        std::ifstream in(records_path);
        if (!in) throw DataError(std::string("cannot open ") + records_path);
        std::vector<BgpPathRecord> records = parse_bgp_path_records(in);
        EventSpec event = parse_event_spec(event_json);
        Classification c = classify_bgp_paths(records, event, origin_only != 0);
        *result_json = dup_string(classification_to_json(c));
    });
}

bgpi_status bgpi_classify_traceroutes(const char* records_path, const char* event_json,
                                      const bgpi_pfx2as* map, char** result_json) {
    return wrap([&] {
        require(records_path, "records path");
        require(event_json, "event");
        require(map, "map");
        require(result_json, "output");
        std::ifstream in(records_path);
        if (!in) throw DataError(std::string("cannot open ") + records_path);
        std::vector<TracerouteRecord> records = parse_traceroute_records(in);
        EventSpec event = parse_event_spec(event_json);
        Classification c = classify_traceroutes(records, event, map->map);
        *result_json = dup_string(classification_to_json(c));
    });
}

}  // extern "C"
