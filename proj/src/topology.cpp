#include "bgpimpact/topology.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "bgpimpact/rng.hpp"

namespace bgpimpact {

namespace {

std::pair<AsId, AsId> unordered_pair(AsId a, AsId b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

bool parse_asn(const std::string& tok, AsId& out) {
    if (tok.empty() || tok.size() > 10) return false;
    std::uint64_t v = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + std::uint64_t(c - '0');
    }
    if (v == 0 || v > 0xffffffffULL) return false;
    out = AsId(v);
    return true;
}

}  // namespace

AsGraph AsGraph::build(std::vector<Edge> edges, const std::vector<AsId>& isolated) {
    AsGraph g;
    g.edges_ = std::move(edges);
    for (const Edge& e : g.edges_) {
        g.nodes_.push_back(e.a);
        g.nodes_.push_back(e.b);
    }
    for (AsId as : isolated) g.nodes_.push_back(as);
    std::sort(g.nodes_.begin(), g.nodes_.end());
    g.nodes_.erase(std::unique(g.nodes_.begin(), g.nodes_.end()), g.nodes_.end());

    g.index_.reserve(g.nodes_.size());
    for (std::uint32_t i = 0; i < g.nodes_.size(); ++i) g.index_[g.nodes_[i]] = i;

    g.adj_.resize(g.nodes_.size());
    for (const Edge& e : g.edges_) {
        std::uint32_t ia = g.index_[e.a];
        std::uint32_t ib = g.index_[e.b];
        if (e.rel == Relationship::ProviderToCustomer) {
            g.adj_[ia].push_back({e.b, Role::Customer});
            g.adj_[ib].push_back({e.a, Role::Provider});
        } else {
            g.adj_[ia].push_back({e.b, Role::Peer});
            g.adj_[ib].push_back({e.a, Role::Peer});
        }
    }
    for (auto& list : g.adj_) {
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& x, const Neighbor& y) { return x.id < y.id; });
    }
    return g;
}

std::uint32_t AsGraph::index_of(AsId as) const {
    auto it = index_.find(as);
    if (it == index_.end()) throw ArgumentError("AS " + std::to_string(as) + " not in graph");
    return it->second;
}

std::optional<std::uint32_t> AsGraph::try_index_of(AsId as) const {
    auto it = index_.find(as);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

AsGraph parse_as_rel(std::istream& in) {
    std::vector<Edge> edges;
    std::map<std::pair<AsId, AsId>, Relationship> seen;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        std::string fields[3];
        int nfields = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '|') {
                if (nfields >= 3) {
                    // CAIDA serial-1 appends a source tag as a 4th field; only
                    // a 4th field is tolerated, anything further is malformed.
                    if (nfields >= 4) throw ParseError("too many fields", lineno);
                    ++nfields;
                } else {
                    fields[nfields++] = line.substr(start, i - start);
                }
                start = i + 1;
            }
        }
        if (nfields < 3) throw ParseError("expected <a>|<b>|<code>", lineno);

        AsId a = 0, b = 0;
        if (!parse_asn(fields[0], a)) throw ParseError("bad ASN '" + fields[0] + "'", lineno);
        if (!parse_asn(fields[1], b)) throw ParseError("bad ASN '" + fields[1] + "'", lineno);
        Relationship rel;
        if (fields[2] == "-1") {
            rel = Relationship::ProviderToCustomer;
        } else if (fields[2] == "0") {
            rel = Relationship::PeerToPeer;
        } else {
            throw ParseError("unknown relationship code '" + fields[2] + "'", lineno);
        }

        auto key = unordered_pair(a, b);
        auto it = seen.find(key);
        if (it != seen.end()) {
            // For p2c pairs the direction matters too; re-check against the
            // stored edge rather than just the relationship kind.
            bool same = false;
            for (const Edge& e : edges) {
                if (unordered_pair(e.a, e.b) == key) {
                    same = e.rel == rel && (rel == Relationship::PeerToPeer ||
                                            (e.a == a && e.b == b));
                    break;
                }
            }
            if (same) continue;  // exact duplicate record, keep first
            throw ParseError("conflicting relationship for pair (" + std::to_string(key.first) +
                                 "," + std::to_string(key.second) + ")",
                             lineno);
        }
        seen.emplace(key, rel);
        edges.push_back({a, b, rel});
    }
    return AsGraph::build(std::move(edges));
}

AsGraph parse_as_rel(const std::string& text) {
    std::istringstream in(text);
    return parse_as_rel(in);
}

AsGraph load_as_rel(const std::string& path) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw DataError("cannot open " + path);
        std::string text;
        char buf[1 << 16];
        int n = 0;
        while ((n = gzread(f, buf, sizeof(buf))) > 0) text.append(buf, std::size_t(n));
        bool bad = n < 0;
        gzclose(f);
        if (bad) throw DataError("gzip read error in " + path);
        return parse_as_rel(text);
    }
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return parse_as_rel(in);
}

void serialize_as_rel(const AsGraph& graph, std::ostream& out) {
    for (const Edge& e : graph.edges()) {
        out << e.a << '|' << e.b << '|'
            << (e.rel == Relationship::ProviderToCustomer ? "-1" : "0") << '\n';
    }
}

std::string serialize_as_rel(const AsGraph& graph) {
    std::ostringstream out;
    serialize_as_rel(graph, out);
    return out.str();
}

AsGraph gen_synthetic_topology(std::uint32_t n_ases, std::uint64_t seed) {
    if (n_ases < 2) throw ArgumentError("need at least 2 ASes");
    Rng rng(derive_seed(seed, /*tag=*/0x746f706fULL));

    const std::uint32_t tier1 = std::min<std::uint32_t>(5, std::max<std::uint32_t>(1, n_ases / 10));
    std::vector<Edge> edges;
    std::map<std::pair<AsId, AsId>, bool> used;
    auto add_edge = [&](AsId a, AsId b, Relationship rel) {
        auto key = unordered_pair(a, b);
        if (a == b || used.count(key)) return false;
        used[key] = true;
        edges.push_back({a, b, rel});
        return true;
    };

    // ASNs are 1..n. Nodes 1..tier1 form a peered clique; every later node
    // picks providers among earlier nodes, skewed toward low (well-connected)
    // indices, which keeps the provider hierarchy acyclic.
    for (AsId a = 1; a <= tier1; ++a)
        for (AsId b = a + 1; b <= tier1; ++b) add_edge(a, b, Relationship::PeerToPeer);

    for (AsId node = tier1 + 1; node <= n_ases; ++node) {
        std::uint32_t n_providers = 1 + (uniform_index(rng, 100) < 30 ? 1 : 0);
        for (std::uint32_t k = 0; k < n_providers; ++k) {
            double u = uniform_double(rng);
            AsId provider = AsId(u * u * double(node - 1)) + 1;
            if (provider >= node) provider = node - 1;
            if (!add_edge(provider, node, Relationship::ProviderToCustomer) && k == 0) {
                // First provider must exist; fall back to a linear probe.
                for (AsId p = 1; p < node; ++p)
                    if (add_edge(p, node, Relationship::ProviderToCustomer)) break;
            }
        }
    }

    std::uint32_t n_peer_edges = n_ases / 4;
    for (std::uint32_t k = 0; k < n_peer_edges; ++k) {
        AsId a = AsId(uniform_index(rng, n_ases)) + 1;
        AsId b = AsId(uniform_index(rng, n_ases)) + 1;
        add_edge(a, b, Relationship::PeerToPeer);
    }
    return AsGraph::build(std::move(edges));
}

ValidationReport validate(const AsGraph& graph) {
    ValidationReport report;
    std::map<std::pair<AsId, AsId>, std::vector<const Edge*>> by_pair;
    for (const Edge& e : graph.edges()) {
        if (e.a == e.b) report.violations.push_back("self-loop at " + std::to_string(e.a));
        by_pair[unordered_pair(e.a, e.b)].push_back(&e);
    }
    for (const auto& [pair, list] : by_pair) {
        if (pair.first == pair.second) continue;
        if (list.size() > 1)
            report.violations.push_back("duplicate edge for pair (" + std::to_string(pair.first) +
                                        "," + std::to_string(pair.second) + ")");
    }

    // Adjacency consistency: each edge must appear with matching roles on
    // both endpoints' neighbor lists.
    for (const Edge& e : graph.edges()) {
        if (e.a == e.b) continue;
        Role want_b = e.rel == Relationship::ProviderToCustomer ? Role::Customer : Role::Peer;
        Role want_a = e.rel == Relationship::ProviderToCustomer ? Role::Provider : Role::Peer;
        bool ok_a = false, ok_b = false;
        for (const Neighbor& n : graph.neighbors_of(e.a))
            if (n.id == e.b && n.role == want_b) ok_a = true;
        for (const Neighbor& n : graph.neighbors_of(e.b))
            if (n.id == e.a && n.role == want_a) ok_b = true;
        if (!ok_a || !ok_b)
            report.violations.push_back("inconsistent adjacency for edge (" +
                                        std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    }

    // Connected components over the undirected view.
    const std::size_t n = graph.node_count();
    std::vector<std::uint32_t> comp(n, std::uint32_t(-1));
    std::vector<std::uint32_t> stack;
    std::uint32_t n_comp = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != std::uint32_t(-1)) continue;
        ++n_comp;
        comp[s] = n_comp;
        stack.push_back(s);
        bool isolated = graph.neighbors(s).empty();
        if (isolated) ++report.isolated_count;
        while (!stack.empty()) {
            std::uint32_t u = stack.back();
            stack.pop_back();
            for (const Neighbor& nb : graph.neighbors(u)) {
                std::uint32_t v = graph.index_of(nb.id);
                if (comp[v] == std::uint32_t(-1)) {
                    comp[v] = n_comp;
                    stack.push_back(v);
                }
            }
        }
    }
    report.component_count = n_comp;
    return report;
}

std::vector<AsId> customer_cone(const AsGraph& graph, AsId root) {
    std::vector<AsId> cone;
    std::vector<bool> seen(graph.node_count(), false);
    std::vector<std::uint32_t> stack{graph.index_of(root)};
    seen[stack[0]] = true;
    while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        cone.push_back(graph.as_at(u));
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (nb.role != Role::Customer) continue;
            std::uint32_t v = graph.index_of(nb.id);
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    std::sort(cone.begin(), cone.end());
    return cone;
}

}  // namespace bgpimpact
