#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bgpimpact/error.hpp"

namespace bgpimpact {

// AS number. Always > 0; 0 is reserved as "no AS" in a few internal spots.
using AsId = std::uint32_t;

enum class Relationship : std::uint8_t {
    ProviderToCustomer,  // edge (a, b): a is provider of b
    PeerToPeer,
};

// Role of a neighbor relative to the AS owning the adjacency list.
enum class Role : std::uint8_t {
    Customer,
    Peer,
    Provider,
};

struct Edge {
    AsId a = 0;
    AsId b = 0;
    Relationship rel = Relationship::PeerToPeer;
};

struct Neighbor {
    AsId id = 0;
    Role role = Role::Peer;
};

// Immutable AS-level topology with business relationships. Safe to share
// across threads once constructed.
class AsGraph {
  public:
    AsGraph() = default;

    // Builds node set, index and adjacency from edges plus explicitly isolated
    // nodes. Permissive: self-loops and duplicates are stored as given so that
    // validate() can report them; parsers reject them earlier.
    static AsGraph build(std::vector<Edge> edges, const std::vector<AsId>& isolated = {});

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<AsId>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool contains(AsId as) const { return index_.find(as) != index_.end(); }

    // Dense index in [0, node_count) for per-AS arrays.
    std::uint32_t index_of(AsId as) const;
    std::optional<std::uint32_t> try_index_of(AsId as) const;
    AsId as_at(std::uint32_t index) const { return nodes_[index]; }

    const std::vector<Neighbor>& neighbors(std::uint32_t index) const { return adj_[index]; }
    const std::vector<Neighbor>& neighbors_of(AsId as) const { return adj_[index_of(as)]; }

    AsId max_as() const { return nodes_.empty() ? 0 : nodes_.back(); }

  private:
    std::vector<AsId> nodes_;  // sorted ascending
    std::unordered_map<AsId, std::uint32_t> index_;
    std::vector<std::vector<Neighbor>> adj_;
    std::vector<Edge> edges_;
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::size_t component_count = 0;
    std::size_t isolated_count = 0;
    bool ok() const { return violations.empty(); }
};

// CAIDA serial-1 AS-relationship format: `<a>|<b>|<code>` with code -1
// (a provider of b) or 0 (peers); '#' starts a comment line.
AsGraph parse_as_rel(std::istream& in);
AsGraph parse_as_rel(const std::string& text);

// Reads a serial-1 file; input is gunzipped when the name ends in ".gz".
AsGraph load_as_rel(const std::string& path);

// Serial-1 serialization, one record per edge in input order.
void serialize_as_rel(const AsGraph& graph, std::ostream& out);
std::string serialize_as_rel(const AsGraph& graph);

// Connected synthetic hierarchy: a small clique of peered tier-1 nodes, every
// later node gets >= 1 provider among earlier nodes, plus random peer edges.
// Pure function of (n_ases, seed).
AsGraph gen_synthetic_topology(std::uint32_t n_ases, std::uint64_t seed);

ValidationReport validate(const AsGraph& graph);

// All ASes reachable by repeatedly following provider->customer edges from
// `root`, including the root itself.
std::vector<AsId> customer_cone(const AsGraph& graph, AsId root);

}  // namespace bgpimpact
