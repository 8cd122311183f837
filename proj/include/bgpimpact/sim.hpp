#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bgpimpact/topology.hpp"

namespace bgpimpact {

enum class PrefixMode : std::uint8_t {
    ExactPrefix,
    SubPrefix,
};

struct HijackScenario {
    AsId victim = 0;
    AsId hijacker = 0;
    std::uint32_t hijack_type = 0;  // N: hijacker's ASN appears N hops from the claimed origin
    PrefixMode prefix_mode = PrefixMode::ExactPrefix;
    std::uint64_t seed = 0;
};

enum class RouteSource : std::uint8_t {
    Victim,
    Hijacker,
};

// Ascending preference order; numeric comparison picks the preferred class.
enum class LearnedFrom : std::uint8_t {
    Provider = 0,
    Peer = 1,
    Customer = 2,
    Self = 3,
};

struct Route {
    RouteSource source = RouteSource::Victim;
    LearnedFrom learned_from = LearnedFrom::Self;
    // First element is the route holder; last elements may be synthetic
    // (Type-N placeholders plus the claimed origin) for hijacker routes.
    std::vector<AsId> path;

    std::size_t effective_length() const { return path.size(); }
};

// Per-AS best route for a single announced prefix, indexed like graph nodes.
struct RibSnapshot {
    AsId origin = 0;
    std::vector<std::optional<Route>> routes;  // by graph dense index

    const std::optional<Route>& route_at(const AsGraph& graph, AsId as) const {
        return routes[graph.index_of(as)];
    }
};

enum class Decision : std::uint8_t {
    Victim,
    Hijacker,
    Unreachable,
};

struct RoutingOutcome {
    HijackScenario scenario;
    std::vector<Decision> decisions;           // by graph dense index
    std::vector<std::optional<Route>> routes;  // empty when routes were not kept
    std::size_t infected_count = 0;
    std::size_t reachable_count = 0;
    // infected / reachable; the hijacker counts as infected, the victim as not.
    double impact = 0.0;

    Decision decision_at(const AsGraph& graph, AsId as) const {
        return decisions[graph.index_of(as)];
    }
    bool has_routes() const { return !routes.empty(); }
};

// Gao-Rexford propagation of a single origin's announcement: prefer routes by
// neighbor class (customer > peer > provider), then shortest path, then a
// seeded per-AS neighbor preference; customer-learned and self-originated
// routes are exported to all neighbors, peer/provider-learned ones only to
// customers.
RibSnapshot propagate_single_origin(const AsGraph& graph, AsId origin, std::uint64_t seed,
                                    RouteSource label = RouteSource::Victim);

RoutingOutcome simulate_hijack(const AsGraph& graph, const HijackScenario& scenario,
                               bool keep_routes = true);

// Reference implementation for small graphs (<= 14 nodes): iterates per-AS
// best responses over all neighbor-offered valley-free routes until the
// unique fixed point is reached. Shares only the preference/tie-break rules
// with simulate_hijack, not its propagation schedule.
RoutingOutcome brute_force_outcome(const AsGraph& graph, const HijackScenario& scenario);

// Order of results matches the input order; results are identical to
// sequential execution regardless of the parallelism hint.
std::vector<RoutingOutcome> batch_simulate(const AsGraph& graph,
                                           const std::vector<HijackScenario>& scenarios,
                                           unsigned parallelism = 1, bool keep_routes = false);

// Seeded neighbor preference shared by the propagation engine and the brute
// force oracle: lower rank = more preferred when class and length tie.
std::uint64_t tie_rank(std::uint64_t seed, AsId holder, AsId neighbor);

// Checks that `path` (holder first, announcement origin last) could arise
// under the export rules. The path must contain only graph members.
bool is_valley_free(const AsGraph& graph, const std::vector<AsId>& path);

void validate_scenario(const AsGraph& graph, const HijackScenario& scenario);

}  // namespace bgpimpact
