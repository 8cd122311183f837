#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bgpimpact/sim.hpp"
#include "bgpimpact/topology.hpp"

namespace bgpimpact {

struct MonitorSet {
    std::string label;
    std::vector<AsId> members;  // ordered, no duplicates
    std::size_t duplicates_dropped = 0;

    std::size_t size() const { return members.size(); }
};

struct MeasurementVector {
    std::vector<std::uint8_t> values;  // aligned with a MonitorSet, each 0/1
    bool corrupted = false;            // true when produced under a failure model
    std::size_t unreachable_warnings = 0;

    std::size_t size() const { return values.size(); }
};

// Ping failure model: probability that an uninfected AS shows no reply when
// its top n_ip hitlist addresses are pinged. The default table carries the
// measured per-AS no-reply rates {1: 12.8%, 2: 4.2%, 3: 2.1%, 10: 0%};
// intermediate n_ip values are linearly interpolated.
struct PingModel {
    std::uint32_t n_ip = 1;
    std::vector<std::pair<std::uint32_t, double>> failure_table = default_failure_table();
    // Optional per-AS overrides; ASes not listed fall back to the table.
    std::vector<std::pair<AsId, double>> per_as;
    std::uint64_t seed = 0;
    // MitM hijacks forward pings to the victim, so infected ASes still reply.
    bool mitm = false;

    static std::vector<std::pair<std::uint32_t, double>> default_failure_table() {
        return {{1, 0.128}, {2, 0.042}, {3, 0.021}, {10, 0.0}};
    }
    static PingModel with_fixed_p(double p, std::uint64_t seed, std::uint32_t n_ip = 1) {
        PingModel m;
        m.n_ip = n_ip;
        m.failure_table = {{n_ip, p}};
        m.seed = seed;
        return m;
    }

    double failure_probability() const;          // p(n_ip) from the table
    double failure_probability(AsId as) const;   // honoring per-AS overrides
    void validate() const;
};

MonitorSet sample_random_monitors(const AsGraph& graph, std::size_t m, std::uint64_t seed);

// Monitors sampled inside the customer cones of a few mid-size providers;
// emulates the placement correlation of real public monitor sets.
MonitorSet sample_clustered_monitors(const AsGraph& graph, std::size_t m, std::uint64_t seed,
                                     std::size_t n_clusters = 3);

// One ASN per line, '#' comments; first occurrence wins on duplicates.
MonitorSet load_monitor_set(std::istream& in, const std::string& label);
MonitorSet load_monitor_set(const std::string& text, const std::string& label);
MonitorSet load_monitor_set_file(const std::string& path, const std::string& label);

// m_i = 1 iff the monitor's decision is Hijacker. Unreachable monitors score
// 0 and bump the warning counter.
MeasurementVector observe_control_plane(const AsGraph& graph, const RoutingOutcome& outcome,
                                        const MonitorSet& monitors);

// Ping view: infected monitors never reply (1); uninfected ones fail to
// reply with probability p(n_ip) (1), otherwise 0. Deterministic per seed.
MeasurementVector observe_ping(const AsGraph& graph, const RoutingOutcome& outcome,
                               const MonitorSet& monitors, const PingModel& model);

}  // namespace bgpimpact
