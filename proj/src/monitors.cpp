#include "bgpimpact/monitors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "bgpimpact/rng.hpp"

namespace bgpimpact {

double PingModel::failure_probability() const {
    if (failure_table.empty()) throw ArgumentError("ping failure table is empty");
    if (n_ip <= failure_table.front().first) return failure_table.front().second;
    for (std::size_t i = 1; i < failure_table.size(); ++i) {
        const auto& [hi_n, hi_p] = failure_table[i];
        if (n_ip > hi_n) continue;
        const auto& [lo_n, lo_p] = failure_table[i - 1];
        if (n_ip == hi_n) return hi_p;
        double t = double(n_ip - lo_n) / double(hi_n - lo_n);
        return lo_p + t * (hi_p - lo_p);
    }
    return failure_table.back().second;
}

double PingModel::failure_probability(AsId as) const {
    for (const auto& [id, p] : per_as)
        if (id == as) return p;
    return failure_probability();
}

void PingModel::validate() const {
    if (n_ip == 0) throw ArgumentError("n_ip must be positive");
    if (failure_table.empty()) throw ArgumentError("ping failure table is empty");
    for (std::size_t i = 0; i < failure_table.size(); ++i) {
        const auto& [n, p] = failure_table[i];
        if (p < 0.0 || p > 1.0) throw ArgumentError("failure probability out of [0,1]");
        if (i > 0) {
            if (n <= failure_table[i - 1].first)
                throw ArgumentError("failure table n_ip values must increase");
            if (p > failure_table[i - 1].second)
                throw ArgumentError("failure table must be non-increasing in n_ip");
        }
    }
    for (const auto& [as, p] : per_as)
        if (p < 0.0 || p > 1.0)
            throw ArgumentError("per-AS failure probability out of [0,1] for AS " +
                                std::to_string(as));
}

MonitorSet sample_random_monitors(const AsGraph& graph, std::size_t m, std::uint64_t seed) {
    if (m > graph.node_count())
        throw ArgumentError("cannot sample " + std::to_string(m) + " monitors from " +
                            std::to_string(graph.node_count()) + " ASes");
    Rng rng(derive_seed(seed, /*tag=*/0x6d6f6e73ULL));
    MonitorSet set;
    set.label = "random";
    set.members = sample_without_replacement(graph.nodes(), m, rng);
    return set;
}

MonitorSet sample_clustered_monitors(const AsGraph& graph, std::size_t m, std::uint64_t seed,
                                     std::size_t n_clusters) {
    if (m > graph.node_count())
        throw ArgumentError("cannot sample " + std::to_string(m) + " monitors from " +
                            std::to_string(graph.node_count()) + " ASes");
    if (n_clusters == 0) throw ArgumentError("n_clusters must be positive");
    Rng rng(derive_seed(seed, /*tag=*/0x636c7573ULL));

    // Candidate cluster roots: providers whose customer cone could host a
    // cluster's share of monitors. Smaller qualifying cones give monitors
    // that share most of their upstream path, i.e. stronger correlation.
    std::size_t per_cluster = std::max<std::size_t>(1, (m + n_clusters - 1) / n_clusters);
    std::size_t min_cone = per_cluster + per_cluster / 2 + 1;
    struct Root {
        AsId as;
        std::vector<AsId> cone;
    };
    std::vector<Root> qualifying;
    for (AsId as : graph.nodes()) {
        std::size_t customers = 0;
        for (const Neighbor& nb : graph.neighbors_of(as))
            if (nb.role == Role::Customer) ++customers;
        if (customers < 2) continue;
        std::vector<AsId> cone = customer_cone(graph, as);
        if (cone.size() >= min_cone) qualifying.push_back({as, std::move(cone)});
    }
    if (qualifying.empty())
        throw ArgumentError("no provider cone large enough for clustered sampling");
    std::sort(qualifying.begin(), qualifying.end(), [](const Root& a, const Root& b) {
        return a.cone.size() != b.cone.size() ? a.cone.size() < b.cone.size() : a.as < b.as;
    });

    // Pick roots among the smallest qualifying cones, then widen until the
    // pooled cones can host m monitors.
    std::size_t window = std::min(qualifying.size(), n_clusters * 4);
    std::vector<std::size_t> picks(window);
    for (std::size_t i = 0; i < window; ++i) picks[i] = i;
    picks = sample_without_replacement(std::move(picks), std::min(n_clusters, window), rng);

    std::set<AsId> pool;
    for (std::size_t idx : picks) pool.insert(qualifying[idx].cone.begin(),
                                              qualifying[idx].cone.end());
    for (std::size_t idx = 0; pool.size() < m && idx < qualifying.size(); ++idx)
        pool.insert(qualifying[idx].cone.begin(), qualifying[idx].cone.end());
    if (pool.size() < m)
        throw ArgumentError("clustered pool has only " + std::to_string(pool.size()) +
                            " ASes, need " + std::to_string(m));

    MonitorSet set;
    set.label = "clustered";
    set.members = sample_without_replacement(std::vector<AsId>(pool.begin(), pool.end()), m, rng);
    return set;
}

MonitorSet load_monitor_set(std::istream& in, const std::string& label) {
    MonitorSet set;
    set.label = label;
    std::set<AsId> seen;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t");
        std::string tok = line.substr(a, b - a + 1);
        std::uint64_t v = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') throw ParseError("bad ASN '" + tok + "'", lineno);
            v = v * 10 + std::uint64_t(c - '0');
            if (v > 0xffffffffULL) throw ParseError("ASN out of range '" + tok + "'", lineno);
        }
        if (v == 0) throw ParseError("ASN must be positive", lineno);
        if (seen.insert(AsId(v)).second)
            set.members.push_back(AsId(v));
        else
            ++set.duplicates_dropped;
    }
    return set;
}

MonitorSet load_monitor_set(const std::string& text, const std::string& label) {
    std::istringstream in(text);
    return load_monitor_set(in, label);
}

MonitorSet load_monitor_set_file(const std::string& path, const std::string& label) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return load_monitor_set(in, label);
}

MeasurementVector observe_control_plane(const AsGraph& graph, const RoutingOutcome& outcome,
                                        const MonitorSet& monitors) {
    MeasurementVector mv;
    mv.values.reserve(monitors.size());
    for (AsId as : monitors.members) {
        Decision d = outcome.decision_at(graph, as);  // throws for unknown AS
        if (d == Decision::Unreachable) ++mv.unreachable_warnings;
        mv.values.push_back(d == Decision::Hijacker ? 1 : 0);
    }
    return mv;
}

MeasurementVector observe_ping(const AsGraph& graph, const RoutingOutcome& outcome,
                               const MonitorSet& monitors, const PingModel& model) {
    model.validate();
    Rng rng(derive_seed(model.seed, /*tag=*/0x70696e67ULL));
    MeasurementVector mv;
    mv.corrupted = true;
    mv.values.reserve(monitors.size());
    for (AsId as : monitors.members) {
        Decision d = outcome.decision_at(graph, as);
        std::uint8_t value = 0;
        switch (d) {
            case Decision::Hijacker:
                value = model.mitm ? 0 : 1;
                break;
            case Decision::Victim:
                value = uniform_double(rng) < model.failure_probability(as) ? 1 : 0;
                break;
            case Decision::Unreachable:
                ++mv.unreachable_warnings;
                value = 0;
                break;
        }
        mv.values.push_back(value);
    }
    return mv;
}

}  // namespace bgpimpact
