#include "bgpimpact/sim.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "bgpimpact/rng.hpp"

namespace bgpimpact {

std::uint64_t tie_rank(std::uint64_t seed, AsId holder, AsId neighbor) {
    return derive_seed(seed ^ 0x7072656655ULL, holder, neighbor);
}

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

struct OriginSeed {
    RouteSource source = RouteSource::Victim;
    AsId origin = 0;
    std::vector<AsId> initial_path;  // holder first; may contain synthetic members
};

// Announcement paths as a parent-pointer forest: full paths are materialized
// only on demand, loop checks walk the chain.
struct PropagationState {
    struct Node {
        bool reached = false;
        RouteSource source = RouteSource::Victim;
        LearnedFrom cls = LearnedFrom::Self;
        std::uint32_t parent = kNoParent;  // graph index of the exporting neighbor
        std::uint32_t seed_slot = 0;       // valid when parent == kNoParent
        std::uint32_t length = 0;          // effective length of the held route
    };
    std::vector<Node> nodes;
    std::vector<OriginSeed> seeds;

    bool creates_loop(AsId candidate, std::uint32_t from, const AsGraph& graph) const {
        std::uint32_t cur = from;
        while (true) {
            if (graph.as_at(cur) == candidate) return true;
            const Node& n = nodes[cur];
            if (n.parent == kNoParent) {
                for (AsId member : seeds[n.seed_slot].initial_path)
                    if (member == candidate) return true;
                return false;
            }
            cur = n.parent;
        }
    }

    std::optional<Route> materialize(std::uint32_t index, const AsGraph& graph) const {
        const Node& n = nodes[index];
        if (!n.reached) return std::nullopt;
        Route r;
        r.source = n.source;
        r.learned_from = n.cls;
        std::uint32_t cur = index;
        while (nodes[cur].parent != kNoParent) {
            r.path.push_back(graph.as_at(cur));
            cur = nodes[cur].parent;
        }
        const auto& tail = seeds[nodes[cur].seed_slot].initial_path;
        r.path.insert(r.path.end(), tail.begin(), tail.end());
        return r;
    }
};

// Three-stage Gao-Rexford computation. Customer routes climb provider edges
// in waves ordered by length, then one round of peer exports, then provider
// routes descend customer edges in waves. Adoption at each stage is final
// because class dominates length and within a class shorter lengths always
// arrive in earlier waves.
PropagationState propagate(const AsGraph& graph, std::vector<OriginSeed> seeds,
                           std::uint64_t seed) {
    PropagationState st;
    st.nodes.resize(graph.node_count());
    st.seeds = std::move(seeds);

    struct Offer {
        std::uint32_t to;
        std::uint32_t from;
    };
    std::vector<std::vector<std::uint32_t>> ready;       // finalized nodes by route length
    std::vector<std::vector<Offer>> pending;             // offers by resulting length
    auto at_level = [](auto& buckets, std::size_t level) -> auto& {
        if (buckets.size() <= level) buckets.resize(level + 1);
        return buckets[level];
    };

    for (std::uint32_t slot = 0; slot < st.seeds.size(); ++slot) {
        const OriginSeed& s = st.seeds[slot];
        std::uint32_t idx = graph.index_of(s.origin);
        auto& node = st.nodes[idx];
        node.reached = true;
        node.source = s.source;
        node.cls = LearnedFrom::Self;
        node.parent = kNoParent;
        node.seed_slot = slot;
        node.length = std::uint32_t(s.initial_path.size());
        at_level(ready, node.length).push_back(idx);
    }

    // Resolves all offers of one length for one class; same-class same-length
    // ties fall to the seeded neighbor preference.
    auto resolve = [&](std::vector<Offer>& offers, LearnedFrom cls, std::uint32_t length,
                       std::vector<std::uint32_t>& adopted) {
        std::sort(offers.begin(), offers.end(), [](const Offer& a, const Offer& b) {
            return a.to < b.to || (a.to == b.to && a.from < b.from);
        });
        std::size_t i = 0;
        while (i < offers.size()) {
            std::uint32_t to = offers[i].to;
            std::size_t j = i;
            bool have = false;
            std::uint32_t best_from = 0;
            std::uint64_t best_rank = 0;
            for (; j < offers.size() && offers[j].to == to; ++j) {
                if (st.nodes[to].reached) continue;
                std::uint32_t from = offers[j].from;
                if (st.creates_loop(graph.as_at(to), from, graph)) continue;
                std::uint64_t rank = tie_rank(seed, graph.as_at(to), graph.as_at(from));
                if (!have || rank < best_rank ||
                    (rank == best_rank && graph.as_at(from) < graph.as_at(best_from))) {
                    have = true;
                    best_rank = rank;
                    best_from = from;
                }
            }
            if (have) {
                auto& node = st.nodes[to];
                node.reached = true;
                node.source = st.nodes[best_from].source;
                node.cls = cls;
                node.parent = best_from;
                node.length = length;
                adopted.push_back(to);
            }
            i = j;
        }
    };

    // Stage 1: self/customer routes ride up provider edges.
    for (std::uint32_t len = 1; len < std::max(ready.size(), pending.size()); ++len) {
        if (len < pending.size() && !pending[len].empty()) {
            std::vector<std::uint32_t> adopted;
            resolve(pending[len], LearnedFrom::Customer, len, adopted);
            pending[len].clear();
            for (std::uint32_t v : adopted) at_level(ready, len).push_back(v);
        }
        if (len >= ready.size()) continue;
        for (std::uint32_t u : ready[len]) {
            for (const Neighbor& nb : graph.neighbors(u)) {
                if (nb.role != Role::Provider) continue;
                std::uint32_t v = graph.index_of(nb.id);
                if (!st.nodes[v].reached) at_level(pending, len + 1).push_back({v, u});
            }
        }
    }

    // Stage 2: one round of peer exports from every self/customer route.
    std::vector<Offer> peer_offers;
    std::vector<std::uint32_t> holders;
    for (std::uint32_t u = 0; u < st.nodes.size(); ++u)
        if (st.nodes[u].reached) holders.push_back(u);
    for (std::uint32_t u : holders) {
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (nb.role != Role::Peer) continue;
            std::uint32_t v = graph.index_of(nb.id);
            if (!st.nodes[v].reached) peer_offers.push_back({v, u});
        }
    }
    // Peer offers differ in length; resolve shortest-first so longer offers
    // to an already-adopting AS lose.
    std::vector<std::vector<Offer>> peer_by_len;
    for (const Offer& o : peer_offers)
        at_level(peer_by_len, st.nodes[o.from].length + 1).push_back(o);
    std::vector<std::uint32_t> peer_adopted;
    for (std::uint32_t len = 0; len < peer_by_len.size(); ++len)
        if (!peer_by_len[len].empty()) resolve(peer_by_len[len], LearnedFrom::Peer, len, peer_adopted);

    // Stage 3: every route descends customer edges in waves.
    std::vector<std::vector<std::uint32_t>> down_ready;
    std::vector<std::vector<Offer>> down_pending;
    for (std::uint32_t u = 0; u < st.nodes.size(); ++u)
        if (st.nodes[u].reached) at_level(down_ready, st.nodes[u].length).push_back(u);
    for (std::uint32_t len = 1; len < std::max(down_ready.size(), down_pending.size()); ++len) {
        if (len < down_pending.size() && !down_pending[len].empty()) {
            std::vector<std::uint32_t> adopted;
            resolve(down_pending[len], LearnedFrom::Provider, len, adopted);
            down_pending[len].clear();
            for (std::uint32_t v : adopted) at_level(down_ready, len).push_back(v);
        }
        if (len >= down_ready.size()) continue;
        for (std::uint32_t u : down_ready[len]) {
            for (const Neighbor& nb : graph.neighbors(u)) {
                if (nb.role != Role::Customer) continue;
                std::uint32_t v = graph.index_of(nb.id);
                if (!st.nodes[v].reached) at_level(down_pending, len + 1).push_back({v, u});
            }
        }
    }

    return st;
}

std::vector<AsId> synthetic_announce_path(const AsGraph& graph, const HijackScenario& sc) {
    std::vector<AsId> path{sc.hijacker};
    if (sc.hijack_type == 0) return path;
    AsId base = graph.max_as();
    if (std::uint64_t(base) + sc.hijack_type - 1 > std::numeric_limits<AsId>::max())
        throw ArgumentError("no AsId space left for Type-N placeholders");
    for (std::uint32_t k = 1; k + 1 <= sc.hijack_type; ++k) path.push_back(base + k);
    path.push_back(sc.victim);
    return path;
}

RoutingOutcome finish_outcome(const HijackScenario& sc, std::vector<Decision> decisions,
                              std::vector<std::optional<Route>> routes) {
    RoutingOutcome out;
    out.scenario = sc;
    out.decisions = std::move(decisions);
    out.routes = std::move(routes);
    for (Decision d : out.decisions) {
        if (d == Decision::Hijacker) ++out.infected_count;
        if (d != Decision::Unreachable) ++out.reachable_count;
    }
    out.impact = out.reachable_count == 0
                     ? 0.0
                     : double(out.infected_count) / double(out.reachable_count);
    return out;
}

}  // namespace

void validate_scenario(const AsGraph& graph, const HijackScenario& scenario) {
    if (scenario.victim == scenario.hijacker)
        throw ArgumentError("victim and hijacker must differ");
    if (!graph.contains(scenario.victim))
        throw ArgumentError("victim AS " + std::to_string(scenario.victim) + " not in graph");
    if (!graph.contains(scenario.hijacker))
        throw ArgumentError("hijacker AS " + std::to_string(scenario.hijacker) + " not in graph");
}

RibSnapshot propagate_single_origin(const AsGraph& graph, AsId origin, std::uint64_t seed,
                                    RouteSource label) {
    if (!graph.contains(origin))
        throw ArgumentError("origin AS " + std::to_string(origin) + " not in graph");
    PropagationState st = propagate(graph, {{label, origin, {origin}}}, seed);
    RibSnapshot snap;
    snap.origin = origin;
    snap.routes.resize(graph.node_count());
    for (std::uint32_t i = 0; i < graph.node_count(); ++i)
        snap.routes[i] = st.materialize(i, graph);
    return snap;
}

RoutingOutcome simulate_hijack(const AsGraph& graph, const HijackScenario& scenario,
                               bool keep_routes) {
    validate_scenario(graph, scenario);
    const std::uint32_t n = std::uint32_t(graph.node_count());
    std::vector<Decision> decisions(n, Decision::Unreachable);
    std::vector<std::optional<Route>> routes;

    if (scenario.prefix_mode == PrefixMode::ExactPrefix) {
        std::vector<OriginSeed> seeds{
            {RouteSource::Victim, scenario.victim, {scenario.victim}},
            {RouteSource::Hijacker, scenario.hijacker, synthetic_announce_path(graph, scenario)},
        };
        PropagationState st = propagate(graph, std::move(seeds), scenario.seed);
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!st.nodes[i].reached) continue;
            decisions[i] = st.nodes[i].source == RouteSource::Hijacker ? Decision::Hijacker
                                                                       : Decision::Victim;
        }
        if (keep_routes) {
            routes.resize(n);
            for (std::uint32_t i = 0; i < n; ++i) routes[i] = st.materialize(i, graph);
        }
        return finish_outcome(scenario, std::move(decisions), std::move(routes));
    }

    // SubPrefix: the more-specific announcement wins by longest-prefix match
    // wherever it propagates; everything else still reaches the victim via
    // the covering prefix.
    PropagationState from_h = propagate(
        graph, {{RouteSource::Hijacker, scenario.hijacker, synthetic_announce_path(graph, scenario)}},
        scenario.seed);
    PropagationState from_v =
        propagate(graph, {{RouteSource::Victim, scenario.victim, {scenario.victim}}}, scenario.seed);
    std::uint32_t victim_idx = graph.index_of(scenario.victim);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (i == victim_idx) {
            decisions[i] = Decision::Victim;
        } else if (from_h.nodes[i].reached) {
            decisions[i] = Decision::Hijacker;
        } else if (from_v.nodes[i].reached) {
            decisions[i] = Decision::Victim;
        }
    }
    if (keep_routes) {
        routes.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i != victim_idx && from_h.nodes[i].reached)
                routes[i] = from_h.materialize(i, graph);
            else
                routes[i] = from_v.materialize(i, graph);
        }
    }
    return finish_outcome(scenario, std::move(decisions), std::move(routes));
}

RoutingOutcome brute_force_outcome(const AsGraph& graph, const HijackScenario& scenario) {
    if (graph.node_count() > 14)
        throw ArgumentError("brute_force_outcome refuses graphs with more than 14 nodes");
    validate_scenario(graph, scenario);

    struct Held {
        RouteSource source;
        LearnedFrom cls;
        std::vector<AsId> path;
    };
    const std::uint32_t n = std::uint32_t(graph.node_count());

    auto equilibrium = [&](const std::vector<std::pair<RouteSource, std::vector<AsId>>>& origins) {
        std::vector<std::optional<Held>> held(n);
        std::vector<bool> pinned(n, false);
        for (const auto& [src, path] : origins) {
            std::uint32_t idx = graph.index_of(path.front());
            held[idx] = Held{src, LearnedFrom::Self, path};
            pinned[idx] = true;
        }
        auto contains = [](const std::vector<AsId>& p, AsId as) {
            return std::find(p.begin(), p.end(), as) != p.end();
        };
        const std::uint32_t max_passes = 4 * n + 16;
        for (std::uint32_t pass = 0; pass < max_passes; ++pass) {
            bool changed = false;
            for (std::uint32_t v = 0; v < n; ++v) {
                if (pinned[v]) continue;
                AsId v_as = graph.as_at(v);
                std::optional<Held> best;
                std::uint64_t best_rank = 0;
                for (const Neighbor& nb : graph.neighbors(v)) {
                    std::uint32_t u = graph.index_of(nb.id);
                    if (!held[u]) continue;
                    const Held& r = *held[u];
                    // u exports to v only if u's route is customer-learned or
                    // self-originated, or v is u's customer.
                    bool export_ok = r.cls == LearnedFrom::Self || r.cls == LearnedFrom::Customer ||
                                     nb.role == Role::Provider;
                    if (!export_ok) continue;
                    if (contains(r.path, v_as)) continue;
                    LearnedFrom cls = nb.role == Role::Customer   ? LearnedFrom::Customer
                                      : nb.role == Role::Peer     ? LearnedFrom::Peer
                                                                  : LearnedFrom::Provider;
                    std::uint64_t rank = tie_rank(scenario.seed, v_as, nb.id);
                    bool better = false;
                    if (!best) {
                        better = true;
                    } else if (cls != best->cls) {
                        better = cls > best->cls;
                    } else if (r.path.size() + 1 != best->path.size()) {
                        better = r.path.size() + 1 < best->path.size();
                    } else if (rank != best_rank) {
                        better = rank < best_rank;
                    } else {
                        better = nb.id < best->path[1];
                    }
                    if (better) {
                        Held h{r.source, cls, {}};
                        h.path.reserve(r.path.size() + 1);
                        h.path.push_back(v_as);
                        h.path.insert(h.path.end(), r.path.begin(), r.path.end());
                        best = std::move(h);
                        best_rank = rank;
                    }
                }
                bool same = (!best && !held[v]) ||
                            (best && held[v] && best->source == held[v]->source &&
                             best->cls == held[v]->cls && best->path == held[v]->path);
                if (!same) {
                    held[v] = std::move(best);
                    changed = true;
                }
            }
            if (!changed) return held;
        }
        throw InternalError("brute force iteration did not converge");
    };

    std::vector<Decision> decisions(n, Decision::Unreachable);
    std::vector<std::optional<Route>> routes(n);
    std::vector<AsId> hijack_path = synthetic_announce_path(graph, scenario);

    if (scenario.prefix_mode == PrefixMode::ExactPrefix) {
        auto held = equilibrium({{RouteSource::Victim, {scenario.victim}},
                                 {RouteSource::Hijacker, hijack_path}});
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!held[i]) continue;
            decisions[i] = held[i]->source == RouteSource::Hijacker ? Decision::Hijacker
                                                                    : Decision::Victim;
            routes[i] = Route{held[i]->source, held[i]->cls, held[i]->path};
        }
    } else {
        auto held_h = equilibrium({{RouteSource::Hijacker, hijack_path}});
        auto held_v = equilibrium({{RouteSource::Victim, {scenario.victim}}});
        std::uint32_t victim_idx = graph.index_of(scenario.victim);
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto& pick = (i != victim_idx && held_h[i]) ? held_h[i] : held_v[i];
            if (i == victim_idx) {
                decisions[i] = Decision::Victim;
            } else if (held_h[i]) {
                decisions[i] = Decision::Hijacker;
            } else if (held_v[i]) {
                decisions[i] = Decision::Victim;
            }
            if (pick) routes[i] = Route{pick->source, pick->cls, pick->path};
        }
    }
    return finish_outcome(scenario, std::move(decisions), std::move(routes));
}

std::vector<RoutingOutcome> batch_simulate(const AsGraph& graph,
                                           const std::vector<HijackScenario>& scenarios,
                                           unsigned parallelism, bool keep_routes) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        try {
            validate_scenario(graph, scenarios[i]);
        } catch (const Error& e) {
            throw ArgumentError("scenario " + std::to_string(i) + ": " + e.what());
        }
    }
    std::vector<RoutingOutcome> results(scenarios.size());
    if (scenarios.empty()) return results;

    unsigned workers = std::max(1u, std::min<unsigned>(parallelism, unsigned(scenarios.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < scenarios.size(); ++i)
            results[i] = simulate_hijack(graph, scenarios[i], keep_routes);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= scenarios.size()) return;
                results[i] = simulate_hijack(graph, scenarios[i], keep_routes);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

bool is_valley_free(const AsGraph& graph, const std::vector<AsId>& path) {
    if (path.empty()) return false;
    LearnedFrom cls = LearnedFrom::Self;
    for (std::size_t i = path.size() - 1; i > 0; --i) {
        AsId exporter = path[i];
        AsId receiver = path[i - 1];
        Role exporter_role = Role::Peer;
        bool adjacent = false;
        for (const Neighbor& nb : graph.neighbors_of(receiver)) {
            if (nb.id == exporter) {
                adjacent = true;
                exporter_role = nb.role;
                break;
            }
        }
        if (!adjacent) return false;
        bool receiver_is_customer = exporter_role == Role::Provider;
        if (!(cls == LearnedFrom::Self || cls == LearnedFrom::Customer || receiver_is_customer))
            return false;
        cls = exporter_role == Role::Customer   ? LearnedFrom::Customer
              : exporter_role == Role::Peer     ? LearnedFrom::Peer
                                                : LearnedFrom::Provider;
    }
    return true;
}

}  // namespace bgpimpact
