#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bgpimpact/monitors.hpp"
#include "bgpimpact/topology.hpp"

namespace bgpimpact {

// IPv4 address in host byte order.
using Ipv4 = std::uint32_t;

struct Ipv4Prefix {
    Ipv4 addr = 0;  // host bits masked off
    std::uint8_t len = 0;

    bool contains(Ipv4 ip) const {
        return len == 0 || ((ip ^ addr) >> (32 - len)) == 0;
    }
    bool operator==(const Ipv4Prefix&) const = default;
    bool operator<(const Ipv4Prefix& o) const {
        return addr != o.addr ? addr < o.addr : len < o.len;
    }
};

Ipv4 parse_ipv4(const std::string& text);            // throws ParseError
Ipv4Prefix parse_ipv4_prefix(const std::string& text);
std::string format_ipv4(Ipv4 ip);
std::string format_prefix(const Ipv4Prefix& prefix);

// Longest-prefix-match map from IPv4 prefixes to origin AS sets (binary trie).
class PrefixToAsMap {
  public:
    void insert(const Ipv4Prefix& prefix, const std::vector<AsId>& origins);

    // Origins of the longest matching prefix; empty when nothing matches.
    const std::vector<AsId>& lookup(Ipv4 ip) const;
    std::optional<Ipv4Prefix> lookup_prefix(Ipv4 ip) const;

    std::size_t entry_count() const { return entries_; }
    // (prefix, origins) pairs in prefix order, for merging and round trips.
    std::vector<std::pair<Ipv4Prefix, std::vector<AsId>>> entries() const;

  private:
    struct TrieNode {
        std::int32_t child[2] = {-1, -1};
        std::int32_t entry = -1;
    };
    std::vector<TrieNode> nodes_{TrieNode{}};
    std::vector<std::pair<Ipv4Prefix, std::vector<AsId>>> values_;
    std::size_t entries_ = 0;
};

// Lines `<prefix>|<asn[,asn...]>` (or the whitespace-separated equivalent);
// '#' comments. Multi-origin entries keep the whole set.
PrefixToAsMap parse_pfx2as(std::istream& in);
PrefixToAsMap parse_pfx2as(const std::string& text);
PrefixToAsMap load_pfx2as(const std::string& path);

// Keeps (prefix, origin) pairs present in strictly more than min_consistency
// of the snapshots (default 0.5: "more than half").
PrefixToAsMap merge_pfx2as_snapshots(const std::vector<PrefixToAsMap>& snapshots,
                                     double min_consistency = 0.5);

struct PingTarget {
    Ipv4 ip = 0;
    double score = 0.0;
};

struct PingTargetList {
    // per-AS targets ordered by descending score
    std::map<AsId, std::vector<PingTarget>> targets;
    std::size_t malformed_lines = 0;
    std::size_t below_threshold = 0;
    std::size_t unmatched_ips = 0;
    std::size_t ases_without_targets = 0;  // matched an AS but nothing qualified
};

// Hitlist lines `<ip> <score>`; keeps per AS the per_as_cap highest-scoring
// IPs with score >= min_score whose longest-prefix origin is that AS.
// Malformed lines are skipped and counted.
PingTargetList build_ping_targets(std::istream& hitlist, const PrefixToAsMap& pfx2as,
                                  double min_score = 0.9, std::size_t per_as_cap = 10);
PingTargetList build_ping_targets(const std::string& hitlist, const PrefixToAsMap& pfx2as,
                                  double min_score = 0.9, std::size_t per_as_cap = 10);

// One hijack event as declared for classification.
struct EventSpec {
    AsId victim = 0;
    AsId hijacker = 0;
    Ipv4Prefix hijacked_prefix;
    std::vector<AsId> victim_upstreams;
    std::vector<AsId> hijacker_upstreams;  // may intersect victim_upstreams
};

struct BgpPathRecord {
    AsId monitor = 0;
    std::vector<AsId> path;  // monitor first
};

struct TracerouteRecord {
    AsId monitor = 0;
    std::vector<std::string> hops;  // source to destination; may be "*"
};

struct Classification {
    MonitorSet monitors;       // records that produced an inference, input order
    MeasurementVector values;  // aligned with monitors
    std::size_t no_inference = 0;
    std::vector<std::string> record_errors;
};

// m = 1 when the hijacker appears in the path, 0 when the path ends at the
// victim without the hijacker; anything else yields no inference. With
// origin_only, only the path's last hop is consulted.
Classification classify_bgp_paths(const std::vector<BgpPathRecord>& records,
                                  const EventSpec& event, bool origin_only = false);

// Maps the last resolvable hop before the hijacked prefix to its origin ASes
// and matches them against the two upstream sets (shared upstreams and
// unresolvable hops yield no inference).
Classification classify_traceroutes(const std::vector<TracerouteRecord>& records,
                                    const EventSpec& event, const PrefixToAsMap& pfx2as);

// JSON Lines record formats: {"monitor": asn, "path": [asn, ...]} and
// {"monitor": asn, "hops": ["ip", ...]}.
std::vector<BgpPathRecord> parse_bgp_path_records(std::istream& in);
std::vector<TracerouteRecord> parse_traceroute_records(std::istream& in);

// {"victim": asn, "hijacker": asn, "prefix": "a.b.c.d/len",
//  "victim_upstreams": [...], "hijacker_upstreams": [...]}
EventSpec parse_event_spec(const std::string& json_text);

std::string classification_to_json(const Classification& c);
std::string ping_targets_to_jsonl(const PingTargetList& list);

}  // namespace bgpimpact
