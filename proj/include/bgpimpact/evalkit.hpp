#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bgpimpact/estimators.hpp"
#include "bgpimpact/monitors.hpp"
#include "bgpimpact/sim.hpp"

namespace bgpimpact {

struct EvalReport {
    std::string estimator;
    std::string monitor_set;
    std::size_t m = 0;  // monitors used
    double bias = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double relmae = 0.0;
    std::size_t n_events = 0;
    std::size_t relmae_skipped = 0;  // events with true impact 0, excluded from relmae
};

// bias = mean(est - truth), rmse = sqrt(mean((est - truth)^2)),
// mae = mean|est - truth|, relmae = mean(|est - truth| / truth) over truth > 0.
EvalReport evaluate(const std::vector<double>& estimates, const std::vector<double>& truths);

struct MeasurementRecord {
    std::vector<AsId> asns;
    std::vector<std::uint8_t> values;
    bool corrupted = false;
};

struct ScenarioRecord {
    std::uint64_t id = 0;
    HijackScenario scenario;
    double impact = 0.0;
    std::size_t infected_count = 0;
    std::size_t reachable_count = 0;
    std::map<std::string, MeasurementRecord> monitor_sets;
    // Optional full per-AS decision dump ('V'/'H'/'U'); written only when
    // present.
    std::map<AsId, char> decisions;
};

// JSON Lines, one record per line, stable field order; read(write(x)) is
// lossless and re-serializes byte-identically.
void write_dataset(std::ostream& out, const std::vector<ScenarioRecord>& records);
std::vector<ScenarioRecord> read_dataset(std::istream& in);
std::string dataset_to_jsonl(const std::vector<ScenarioRecord>& records);
std::vector<ScenarioRecord> dataset_from_jsonl(const std::string& text);

// Aligned observation matrix for one monitor-set label across all records.
struct DatasetView {
    std::vector<AsId> monitor_asns;
    std::vector<std::vector<std::uint8_t>> observations;  // rows = events
    std::vector<double> impacts;
};
DatasetView extract_observations(const std::vector<ScenarioRecord>& records,
                                 const std::string& label);

struct ScenarioGenConfig {
    std::size_t count = 0;
    std::uint32_t hijack_type = 0;
    PrefixMode prefix_mode = PrefixMode::ExactPrefix;
    std::uint64_t seed = 0;
    std::vector<AsId> victim_pool;    // empty = any AS in the graph
    std::vector<AsId> hijacker_pool;  // empty = any AS in the graph
    // Emit each {V,H} together with its swapped twin {H,V} under the same
    // per-scenario seed (2 * count scenarios).
    bool symmetric_pairs = false;
};
std::vector<HijackScenario> generate_scenarios(const AsGraph& graph,
                                               const ScenarioGenConfig& config);

struct MonitorSource {
    enum class Kind { Random, Clustered, Fixed };
    Kind kind = Kind::Random;
    std::size_t n_clusters = 3;
    MonitorSet fixed;

    static MonitorSource random() { return {}; }
    static MonitorSource clustered(std::size_t n_clusters = 3) {
        MonitorSource s;
        s.kind = Kind::Clustered;
        s.n_clusters = n_clusters;
        return s;
    }
    static MonitorSource fixed_set(MonitorSet set) {
        MonitorSource s;
        s.kind = Kind::Fixed;
        s.fixed = std::move(set);
        return s;
    }
    std::string label() const;
};

struct NieExperimentConfig {
    std::size_t n_scenarios = 100;
    std::uint32_t hijack_type = 0;
    PrefixMode prefix_mode = PrefixMode::ExactPrefix;
    MonitorSource monitors;
    std::vector<std::size_t> m_grid;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    // When set, monitors are observed through the ping failure model instead
    // of the control plane (Ping-IE).
    std::optional<PingModel> ping;
};

// For each grid size M: simulate, observe, estimate with NIE, evaluate.
// Random monitors are redrawn per scenario; clustered/fixed sources keep one
// pool and draw a per-scenario subset of size M from it.
std::vector<EvalReport> run_nie_experiment(const AsGraph& graph,
                                           const NieExperimentConfig& config);

struct LreExperimentConfig {
    std::size_t n_train = 1000;
    std::size_t n_test = 1000;
    std::uint32_t hijack_type = 0;
    PrefixMode prefix_mode = PrefixMode::ExactPrefix;
    MonitorSource monitors;
    double alpha = 50.0;
    std::vector<std::size_t> m_grid;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    // Drop training scenarios whose unordered {V,H} pair appears in the test
    // split, in either order.
    bool leave_pair_out = true;
};

struct LreExperimentRow {
    std::size_t m = 0;
    EvalReport lre;
    EvalReport nie;
    LreModel model;
};

// Fits the ridge LRE on the train split and evaluates LRE and NIE on the
// test split for each monitor count. Clustered/fixed sources keep one
// monitor set per grid size (weights tied to monitor ASNs, as with a real
// collector list); the random source redraws monitors per event, so the
// observations are independent and the weights are tied to sample slots.
std::vector<LreExperimentRow> run_lre_experiment(const AsGraph& graph,
                                                 const LreExperimentConfig& config);

// CSV, header `estimator,monitor_set,M,bias,rmse,mae,relmae,n`.
void write_reports_csv(std::ostream& out, const std::vector<EvalReport>& reports);
std::string reports_to_csv(const std::vector<EvalReport>& reports);

}  // namespace bgpimpact
