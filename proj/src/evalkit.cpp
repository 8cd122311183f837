#include "bgpimpact/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "bgpimpact/rng.hpp"
#include "json.hpp"

namespace bgpimpact {

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kTagScenarioGen = 0x7363656eULL;
constexpr std::uint64_t kTagMonitorDraw = 0x6d647277ULL;
constexpr std::uint64_t kTagPool = 0x706f6f6cULL;
constexpr std::uint64_t kTagPing = 0x70676f62ULL;
constexpr std::uint64_t kTagTrain = 0x74726e00ULL;
constexpr std::uint64_t kTagTest = 0x74737400ULL;

const char* prefix_mode_name(PrefixMode mode) {
    return mode == PrefixMode::ExactPrefix ? "exact" : "sub";
}

PrefixMode prefix_mode_from(const std::string& name, long line) {
    if (name == "exact") return PrefixMode::ExactPrefix;
    if (name == "sub") return PrefixMode::SubPrefix;
    throw ParseError("unknown prefix_mode '" + name + "'", line);
}

std::vector<double> impacts_of(const std::vector<RoutingOutcome>& outcomes) {
    std::vector<double> v;
    v.reserve(outcomes.size());
    for (const auto& o : outcomes) v.push_back(o.impact);
    return v;
}

// Per-scenario monitor set for one grid size: random sources resample the
// whole graph, pool-backed sources resample a subset of the pool.
MonitorSet draw_monitors(const AsGraph& graph, const MonitorSource& source,
                         const MonitorSet* pool, std::size_t m, std::uint64_t seed,
                         std::size_t scenario_idx) {
    if (source.kind == MonitorSource::Kind::Random)
        return sample_random_monitors(graph, m, derive_seed(seed, kTagMonitorDraw, scenario_idx));
    if (m > pool->size())
        throw ArgumentError("monitor pool too small for M=" + std::to_string(m));
    Rng rng(derive_seed(seed, kTagMonitorDraw ^ m, scenario_idx));
    MonitorSet set;
    set.label = pool->label;
    set.members = sample_without_replacement(pool->members, m, rng);
    return set;
}

std::optional<MonitorSet> build_pool(const AsGraph& graph, const MonitorSource& source,
                                     std::size_t max_m, std::uint64_t seed) {
    switch (source.kind) {
        case MonitorSource::Kind::Random:
            return std::nullopt;
        case MonitorSource::Kind::Clustered: {
            std::size_t pool_size =
                std::min(graph.node_count(), std::max<std::size_t>(max_m, max_m * 3 / 2));
            return sample_clustered_monitors(graph, pool_size, derive_seed(seed, kTagPool),
                                             source.n_clusters);
        }
        case MonitorSource::Kind::Fixed:
            if (source.fixed.size() < max_m)
                throw ArgumentError("fixed monitor set smaller than the largest grid size");
            return source.fixed;
    }
    throw InternalError("unhandled monitor source");
}

}  // namespace

std::string MonitorSource::label() const {
    switch (kind) {
        case Kind::Random:
            return "random";
        case Kind::Clustered:
            return "clustered";
        case Kind::Fixed:
            return fixed.label.empty() ? "fixed" : fixed.label;
    }
    return "?";
}

EvalReport evaluate(const std::vector<double>& estimates, const std::vector<double>& truths) {
    if (estimates.empty()) throw ArgumentError("no estimates to evaluate");
    if (estimates.size() != truths.size())
        throw ArgumentError("estimates and truths differ in length");
    EvalReport r;
    r.n_events = estimates.size();
    double sum = 0, sum_sq = 0, sum_abs = 0, sum_rel = 0;
    std::size_t rel_n = 0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        double err = estimates[i] - truths[i];
        sum += err;
        sum_sq += err * err;
        sum_abs += std::abs(err);
        if (truths[i] > 0.0) {
            sum_rel += std::abs(err) / truths[i];
            ++rel_n;
        } else {
            ++r.relmae_skipped;
        }
    }
    r.bias = sum / double(r.n_events);
    r.rmse = std::sqrt(sum_sq / double(r.n_events));
    r.mae = sum_abs / double(r.n_events);
    r.relmae = rel_n ? sum_rel / double(rel_n) : 0.0;
    return r;
}

void write_dataset(std::ostream& out, const std::vector<ScenarioRecord>& records) {
    for (const ScenarioRecord& rec : records) {
        ordered_json j;
        j["id"] = rec.id;
        j["victim"] = rec.scenario.victim;
        j["hijacker"] = rec.scenario.hijacker;
        j["type"] = rec.scenario.hijack_type;
        j["prefix_mode"] = prefix_mode_name(rec.scenario.prefix_mode);
        j["seed"] = rec.scenario.seed;
        j["impact"] = rec.impact;
        j["infected_count"] = rec.infected_count;
        j["reachable_count"] = rec.reachable_count;
        ordered_json sets = ordered_json::object();
        for (const auto& [label, mv] : rec.monitor_sets) {
            ordered_json s;
            s["asns"] = mv.asns;
            s["m"] = mv.values;
            s["corrupted"] = mv.corrupted;
            sets[label] = std::move(s);
        }
        j["monitor_sets"] = std::move(sets);
        if (!rec.decisions.empty()) {
            ordered_json d = ordered_json::object();
            for (const auto& [as, code] : rec.decisions)
                d[std::to_string(as)] = std::string(1, code);
            j["decisions"] = std::move(d);
        }
        out << j.dump() << '\n';
    }
}

std::vector<ScenarioRecord> read_dataset(std::istream& in) {
    std::vector<ScenarioRecord> records;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad JSON: ") + e.what(), lineno);
        }
        ScenarioRecord rec;
        try {
            rec.id = j.at("id").get<std::uint64_t>();
            rec.scenario.victim = j.at("victim").get<AsId>();
            rec.scenario.hijacker = j.at("hijacker").get<AsId>();
            rec.scenario.hijack_type = j.at("type").get<std::uint32_t>();
            rec.scenario.prefix_mode =
                prefix_mode_from(j.at("prefix_mode").get<std::string>(), lineno);
            rec.scenario.seed = j.at("seed").get<std::uint64_t>();
            rec.impact = j.at("impact").get<double>();
            rec.infected_count = j.at("infected_count").get<std::size_t>();
            rec.reachable_count = j.at("reachable_count").get<std::size_t>();
            for (const auto& [label, s] : j.at("monitor_sets").items()) {
                MeasurementRecord mv;
                mv.asns = s.at("asns").get<std::vector<AsId>>();
                mv.values = s.at("m").get<std::vector<std::uint8_t>>();
                mv.corrupted = s.value("corrupted", false);
                rec.monitor_sets.emplace(label, std::move(mv));
            }
            if (j.contains("decisions")) {
                for (const auto& [as, code] : j.at("decisions").items()) {
                    std::string c = code.get<std::string>();
                    if (c.size() != 1 || (c != "V" && c != "H" && c != "U"))
                        throw ParseError("bad decision code '" + c + "'", lineno);
                    rec.decisions[AsId(std::stoul(as))] = c[0];
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad record: ") + e.what(), lineno);
        }
        if (rec.impact < 0.0 || rec.impact > 1.0)
            throw ParseError("impact out of [0,1]", lineno);
        for (const auto& [label, mv] : rec.monitor_sets) {
            if (mv.asns.size() != mv.values.size())
                throw ParseError("monitor set '" + label + "' misaligned", lineno);
            for (std::uint8_t v : mv.values)
                if (v > 1) throw ParseError("measurement bit out of {0,1}", lineno);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::string dataset_to_jsonl(const std::vector<ScenarioRecord>& records) {
    std::ostringstream out;
    write_dataset(out, records);
    return out.str();
}

std::vector<ScenarioRecord> dataset_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    return read_dataset(in);
}

DatasetView extract_observations(const std::vector<ScenarioRecord>& records,
                                 const std::string& label) {
    if (records.empty()) throw ArgumentError("dataset is empty");
    DatasetView view;
    for (const ScenarioRecord& rec : records) {
        auto it = rec.monitor_sets.find(label);
        if (it == rec.monitor_sets.end())
            throw DataError("record " + std::to_string(rec.id) + " lacks monitor set '" +
                            label + "'");
        if (view.monitor_asns.empty())
            view.monitor_asns = it->second.asns;
        else if (view.monitor_asns != it->second.asns)
            throw DataError("monitor set '" + label + "' is not aligned across records");
        view.observations.push_back(it->second.values);
        view.impacts.push_back(rec.impact);
    }
    return view;
}

std::vector<HijackScenario> generate_scenarios(const AsGraph& graph,
                                               const ScenarioGenConfig& config) {
    if (graph.node_count() < 2) throw ArgumentError("graph too small for scenarios");
    const std::vector<AsId>& victims =
        config.victim_pool.empty() ? graph.nodes() : config.victim_pool;
    const std::vector<AsId>& hijackers =
        config.hijacker_pool.empty() ? graph.nodes() : config.hijacker_pool;
    for (AsId as : config.victim_pool)
        if (!graph.contains(as))
            throw ArgumentError("victim pool AS " + std::to_string(as) + " not in graph");
    for (AsId as : config.hijacker_pool)
        if (!graph.contains(as))
            throw ArgumentError("hijacker pool AS " + std::to_string(as) + " not in graph");

    Rng rng(derive_seed(config.seed, kTagScenarioGen));
    std::vector<HijackScenario> scenarios;
    scenarios.reserve(config.count * (config.symmetric_pairs ? 2 : 1));
    for (std::size_t i = 0; i < config.count; ++i) {
        AsId v = victims[uniform_index(rng, victims.size())];
        AsId h = hijackers[uniform_index(rng, hijackers.size())];
        for (int guard = 0; h == v; ++guard) {
            if (guard > 1000)
                throw ArgumentError("cannot draw distinct victim/hijacker from the pools");
            h = hijackers[uniform_index(rng, hijackers.size())];
        }
        std::uint64_t scenario_seed = derive_seed(config.seed, kTagScenarioGen, i + 1);
        scenarios.push_back({v, h, config.hijack_type, config.prefix_mode, scenario_seed});
        if (config.symmetric_pairs)
            scenarios.push_back({h, v, config.hijack_type, config.prefix_mode, scenario_seed});
    }
    return scenarios;
}

std::vector<EvalReport> run_nie_experiment(const AsGraph& graph,
                                           const NieExperimentConfig& config) {
    if (config.m_grid.empty()) throw ArgumentError("empty M grid");
    ScenarioGenConfig gen;
    gen.count = config.n_scenarios;
    gen.hijack_type = config.hijack_type;
    gen.prefix_mode = config.prefix_mode;
    gen.seed = config.seed;
    std::vector<HijackScenario> scenarios = generate_scenarios(graph, gen);
    std::vector<RoutingOutcome> outcomes =
        batch_simulate(graph, scenarios, config.jobs, /*keep_routes=*/false);
    std::vector<double> truths = impacts_of(outcomes);

    std::size_t max_m = *std::max_element(config.m_grid.begin(), config.m_grid.end());
    std::optional<MonitorSet> pool = build_pool(graph, config.monitors, max_m, config.seed);

    std::vector<EvalReport> reports;
    for (std::size_t m : config.m_grid) {
        std::vector<double> estimates;
        estimates.reserve(outcomes.size());
        for (std::size_t idx = 0; idx < outcomes.size(); ++idx) {
            MonitorSet monitors = draw_monitors(graph, config.monitors,
                                                pool ? &*pool : nullptr, m, config.seed, idx);
            MeasurementVector mv;
            if (config.ping) {
                PingModel model = *config.ping;
                model.seed = derive_seed(config.seed, kTagPing ^ m, idx);
                mv = observe_ping(graph, outcomes[idx], monitors, model);
            } else {
                mv = observe_control_plane(graph, outcomes[idx], monitors);
            }
            estimates.push_back(nie(mv).value);
        }
        EvalReport r = evaluate(estimates, truths);
        r.estimator = config.ping ? "ping-ie" : "nie";
        r.monitor_set = config.monitors.label();
        r.m = m;
        reports.push_back(std::move(r));
    }
    return reports;
}

std::vector<LreExperimentRow> run_lre_experiment(const AsGraph& graph,
                                                 const LreExperimentConfig& config) {
    if (config.m_grid.empty()) throw ArgumentError("empty M grid");
    ScenarioGenConfig gen;
    gen.hijack_type = config.hijack_type;
    gen.prefix_mode = config.prefix_mode;
    gen.count = config.n_train;
    gen.seed = derive_seed(config.seed, kTagTrain);
    std::vector<HijackScenario> train = generate_scenarios(graph, gen);
    gen.count = config.n_test;
    gen.seed = derive_seed(config.seed, kTagTest);
    std::vector<HijackScenario> test = generate_scenarios(graph, gen);

    if (config.leave_pair_out) {
        std::set<std::pair<AsId, AsId>> test_pairs;
        for (const HijackScenario& sc : test)
            test_pairs.insert(sc.victim < sc.hijacker
                                  ? std::make_pair(sc.victim, sc.hijacker)
                                  : std::make_pair(sc.hijacker, sc.victim));
        std::erase_if(train, [&](const HijackScenario& sc) {
            auto key = sc.victim < sc.hijacker ? std::make_pair(sc.victim, sc.hijacker)
                                               : std::make_pair(sc.hijacker, sc.victim);
            return test_pairs.count(key) > 0;
        });
    }
    if (train.empty()) throw ArgumentError("no training scenarios left");

    std::vector<RoutingOutcome> train_out = batch_simulate(graph, train, config.jobs, false);
    std::vector<RoutingOutcome> test_out = batch_simulate(graph, test, config.jobs, false);
    std::vector<double> train_truths = impacts_of(train_out);
    std::vector<double> test_truths = impacts_of(test_out);

    std::size_t max_m = *std::max_element(config.m_grid.begin(), config.m_grid.end());
    std::optional<MonitorSet> pool = build_pool(graph, config.monitors, max_m, config.seed);

    std::vector<LreExperimentRow> rows;
    for (std::size_t m : config.m_grid) {
        // Clustered/fixed sources model a real monitor list: one fixed set
        // per grid size, weights tied to the monitor ASNs. The random source
        // models independent monitors: a fresh draw per event, weights tied
        // to the sample slot.
        MonitorSet monitors;
        if (pool) {
            Rng rng(derive_seed(config.seed, kTagMonitorDraw ^ m));
            monitors.label = pool->label;
            monitors.members = sample_without_replacement(pool->members, m, rng);
        }
        auto event_monitors = [&](std::uint64_t tag, std::size_t event_idx) -> MonitorSet {
            if (pool) return monitors;
            return sample_random_monitors(graph, m,
                                          derive_seed(config.seed, tag ^ m, event_idx));
        };

        std::vector<std::vector<std::uint8_t>> x;
        x.reserve(train_out.size());
        for (std::size_t j = 0; j < train_out.size(); ++j)
            x.push_back(
                observe_control_plane(graph, train_out[j], event_monitors(kTagTrain, j)).values);
        std::vector<AsId> weight_labels;
        if (pool) {
            weight_labels = monitors.members;
        } else {
            for (std::size_t slot = 1; slot <= m; ++slot) weight_labels.push_back(AsId(slot));
        }
        LreModel model = fit_lre(x, train_truths, config.alpha, weight_labels);

        std::vector<double> lre_est, nie_est;
        lre_est.reserve(test_out.size());
        nie_est.reserve(test_out.size());
        for (std::size_t j = 0; j < test_out.size(); ++j) {
            MeasurementVector mv =
                observe_control_plane(graph, test_out[j], event_monitors(kTagTest, j));
            lre_est.push_back(predict_lre(model, mv).value);
            nie_est.push_back(nie(mv).value);
        }

        LreExperimentRow row;
        row.m = m;
        row.model = std::move(model);
        row.lre = evaluate(lre_est, test_truths);
        row.lre.estimator = "lre";
        row.lre.monitor_set = config.monitors.label();
        row.lre.m = m;
        row.nie = evaluate(nie_est, test_truths);
        row.nie.estimator = "nie";
        row.nie.monitor_set = config.monitors.label();
        row.nie.m = m;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_reports_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
    out << "estimator,monitor_set,M,bias,rmse,mae,relmae,n\n";
    char buf[160];
    for (const EvalReport& r : reports) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.8g,%.8g,%.8g,%.8g,%zu",
                      r.estimator.c_str(), r.monitor_set.c_str(), r.m, r.bias, r.rmse, r.mae,
                      r.relmae, r.n_events);
        out << buf << '\n';
    }
}

std::string reports_to_csv(const std::vector<EvalReport>& reports) {
    std::ostringstream out;
    write_reports_csv(out, reports);
    return out.str();
}

}  // namespace bgpimpact
