#include "bgpimpact/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bgpimpact {

namespace {

const std::vector<AsId> kNoOrigins{};

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

AsId parse_asn_or_throw(const std::string& tok, long line) {
    if (tok.empty()) throw ParseError("empty ASN", line);
    std::uint64_t v = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') throw ParseError("bad ASN '" + tok + "'", line);
        v = v * 10 + std::uint64_t(c - '0');
        if (v > 0xffffffffULL) throw ParseError("ASN out of range '" + tok + "'", line);
    }
    if (v == 0) throw ParseError("ASN must be positive", line);
    return AsId(v);
}

bool in_set(const std::vector<AsId>& set, AsId as) {
    return std::find(set.begin(), set.end(), as) != set.end();
}

}  // namespace

Ipv4 parse_ipv4(const std::string& text) {
    Ipv4 ip = 0;
    int octets = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (octets == 4) throw ParseError("bad IPv4 '" + text + "'");
        std::uint32_t value = 0;
        std::size_t digits = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            value = value * 10 + std::uint32_t(text[i] - '0');
            if (value > 255 || ++digits > 3) throw ParseError("bad IPv4 '" + text + "'");
            ++i;
        }
        if (digits == 0) throw ParseError("bad IPv4 '" + text + "'");
        ip = (ip << 8) | value;
        ++octets;
        if (i < text.size()) {
            if (text[i] != '.') throw ParseError("bad IPv4 '" + text + "'");
            ++i;
            if (i == text.size()) throw ParseError("bad IPv4 '" + text + "'");
        }
    }
    if (octets != 4) throw ParseError("bad IPv4 '" + text + "'");
    return ip;
}

Ipv4Prefix parse_ipv4_prefix(const std::string& text) {
    std::size_t slash = text.find('/');
    if (slash == std::string::npos) throw ParseError("missing /len in '" + text + "'");
    Ipv4 addr = parse_ipv4(text.substr(0, slash));
    std::string len_tok = text.substr(slash + 1);
    if (len_tok.empty() || len_tok.size() > 2) throw ParseError("bad prefix length in '" + text + "'");
    std::uint32_t len = 0;
    for (char c : len_tok) {
        if (c < '0' || c > '9') throw ParseError("bad prefix length in '" + text + "'");
        len = len * 10 + std::uint32_t(c - '0');
    }
    if (len > 32) throw ParseError("prefix length > 32 in '" + text + "'");
    Ipv4Prefix p;
    p.len = std::uint8_t(len);
    p.addr = len == 0 ? 0 : (addr & (len == 32 ? 0xffffffffu : ~((1u << (32 - len)) - 1u)));
    return p;
}

std::string format_ipv4(Ipv4 ip) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (ip >> 24) & 0xff, (ip >> 16) & 0xff,
                  (ip >> 8) & 0xff, ip & 0xff);
    return buf;
}

std::string format_prefix(const Ipv4Prefix& prefix) {
    return format_ipv4(prefix.addr) + "/" + std::to_string(prefix.len);
}

void PrefixToAsMap::insert(const Ipv4Prefix& prefix, const std::vector<AsId>& origins) {
    std::int32_t node = 0;
    for (std::uint8_t depth = 0; depth < prefix.len; ++depth) {
        int bit = (prefix.addr >> (31 - depth)) & 1;
        if (nodes_[node].child[bit] < 0) {
            nodes_[node].child[bit] = std::int32_t(nodes_.size());
            nodes_.push_back(TrieNode{});
        }
        node = nodes_[node].child[bit];
    }
    if (nodes_[node].entry < 0) {
        nodes_[node].entry = std::int32_t(values_.size());
        values_.push_back({prefix, {}});
        ++entries_;
    }
    std::vector<AsId>& set = values_[nodes_[node].entry].second;
    for (AsId as : origins)
        if (!in_set(set, as)) set.push_back(as);
    std::sort(set.begin(), set.end());
}

const std::vector<AsId>& PrefixToAsMap::lookup(Ipv4 ip) const {
    std::int32_t node = 0;
    std::int32_t best = nodes_[0].entry;
    for (int depth = 0; depth < 32; ++depth) {
        node = nodes_[node].child[(ip >> (31 - depth)) & 1];
        if (node < 0) break;
        if (nodes_[node].entry >= 0) best = nodes_[node].entry;
    }
    return best < 0 ? kNoOrigins : values_[best].second;
}

std::optional<Ipv4Prefix> PrefixToAsMap::lookup_prefix(Ipv4 ip) const {
    std::int32_t node = 0;
    std::int32_t best = nodes_[0].entry;
    for (int depth = 0; depth < 32; ++depth) {
        node = nodes_[node].child[(ip >> (31 - depth)) & 1];
        if (node < 0) break;
        if (nodes_[node].entry >= 0) best = nodes_[node].entry;
    }
    if (best < 0) return std::nullopt;
    return values_[best].first;
}

std::vector<std::pair<Ipv4Prefix, std::vector<AsId>>> PrefixToAsMap::entries() const {
    auto out = values_;
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

PrefixToAsMap parse_pfx2as(std::istream& in) {
    PrefixToAsMap map;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);

        std::string prefix_tok, asn_tok;
        std::size_t pipe = line.find('|');
        if (pipe != std::string::npos) {
            prefix_tok = line.substr(0, pipe);
            asn_tok = line.substr(pipe + 1);
            // trim
            auto trim = [](std::string& s) {
                std::size_t a = s.find_first_not_of(" \t");
                std::size_t b = s.find_last_not_of(" \t");
                s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
            };
            trim(prefix_tok);
            trim(asn_tok);
            if (prefix_tok.empty() || asn_tok.empty() || asn_tok.find('|') != std::string::npos)
                throw ParseError("expected <prefix>|<asn[,asn...]>", lineno);
        } else {
            std::vector<std::string> toks = split_ws(line);
            if (toks.empty()) continue;
            if (toks.size() != 2) throw ParseError("expected <prefix> <asn[,asn...]>", lineno);
            prefix_tok = toks[0];
            asn_tok = toks[1];
        }

        Ipv4Prefix prefix;
        try {
            prefix = parse_ipv4_prefix(prefix_tok);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
        }
        std::vector<AsId> origins;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= asn_tok.size(); ++i) {
            if (i == asn_tok.size() || asn_tok[i] == ',') {
                origins.push_back(parse_asn_or_throw(asn_tok.substr(start, i - start), lineno));
                start = i + 1;
            }
        }
        map.insert(prefix, origins);
    }
    return map;
}

PrefixToAsMap parse_pfx2as(const std::string& text) {
    std::istringstream in(text);
    return parse_pfx2as(in);
}

PrefixToAsMap load_pfx2as(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return parse_pfx2as(in);
}

PrefixToAsMap merge_pfx2as_snapshots(const std::vector<PrefixToAsMap>& snapshots,
                                     double min_consistency) {
    if (snapshots.empty()) throw ArgumentError("no snapshots to merge");
    if (!(min_consistency > 0.0 && min_consistency <= 1.0))
        throw ArgumentError("min_consistency must be in (0,1]");
    std::map<std::pair<Ipv4Prefix, AsId>, std::size_t> counts;
    for (const PrefixToAsMap& snap : snapshots)
        for (const auto& [prefix, origins] : snap.entries())
            for (AsId as : origins) ++counts[{prefix, as}];

    PrefixToAsMap merged;
    const double n = double(snapshots.size());
    for (const auto& [key, count] : counts) {
        if (double(count) > min_consistency * n)
            merged.insert(key.first, {key.second});
    }
    return merged;
}

PingTargetList build_ping_targets(std::istream& hitlist, const PrefixToAsMap& pfx2as,
                                  double min_score, std::size_t per_as_cap) {
    if (!(min_score >= 0.0 && min_score <= 1.0))
        throw ArgumentError("min_score must be in [0,1]");
    if (per_as_cap == 0) throw ArgumentError("per_as_cap must be positive");

    PingTargetList out;
    std::set<AsId> seen_as;
    std::string line;
    while (std::getline(hitlist, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::vector<std::string> toks = split_ws(line);
        if (toks.empty()) continue;
        Ipv4 ip = 0;
        double score = -1.0;
        if (toks.size() == 2) {
            try {
                ip = parse_ipv4(toks[0]);
                std::size_t pos = 0;
                score = std::stod(toks[1], &pos);
                if (pos != toks[1].size()) score = -1.0;
            } catch (...) {
                score = -1.0;
            }
        }
        if (score < 0.0 || score > 1.0) {
            ++out.malformed_lines;
            continue;
        }
        const std::vector<AsId>& origins = pfx2as.lookup(ip);
        if (origins.empty()) {
            ++out.unmatched_ips;
            continue;
        }
        for (AsId as : origins) seen_as.insert(as);
        if (score < min_score) {
            ++out.below_threshold;
            continue;
        }
        for (AsId as : origins) out.targets[as].push_back({ip, score});
    }
    for (auto& [as, targets] : out.targets) {
        std::stable_sort(targets.begin(), targets.end(), [](const PingTarget& a, const PingTarget& b) {
            return a.score != b.score ? a.score > b.score : a.ip < b.ip;
        });
        if (targets.size() > per_as_cap) targets.resize(per_as_cap);
    }
    for (AsId as : seen_as)
        if (!out.targets.count(as)) ++out.ases_without_targets;
    return out;
}

PingTargetList build_ping_targets(const std::string& hitlist, const PrefixToAsMap& pfx2as,
                                  double min_score, std::size_t per_as_cap) {
    std::istringstream in(hitlist);
    return build_ping_targets(in, pfx2as, min_score, per_as_cap);
}

Classification classify_bgp_paths(const std::vector<BgpPathRecord>& records,
                                  const EventSpec& event, bool origin_only) {
    Classification out;
    out.monitors.label = "bgp-paths";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const BgpPathRecord& rec = records[i];
        if (rec.path.empty()) {
            out.record_errors.push_back("record " + std::to_string(i) + ": empty path");
            continue;
        }
        if (rec.path.front() != rec.monitor) {
            out.record_errors.push_back("record " + std::to_string(i) +
                                        ": path does not start at the monitor");
            continue;
        }
        std::optional<bool> infected;
        if (origin_only) {
            AsId origin = rec.path.back();
            if (origin == event.hijacker)
                infected = true;
            else if (origin == event.victim)
                infected = false;
        } else {
            if (in_set(rec.path, event.hijacker))
                infected = true;
            else if (rec.path.back() == event.victim)
                infected = false;
        }
        if (!infected.has_value()) {
            ++out.no_inference;
            continue;
        }
        out.monitors.members.push_back(rec.monitor);
        out.values.values.push_back(*infected ? 1 : 0);
    }
    return out;
}

Classification classify_traceroutes(const std::vector<TracerouteRecord>& records,
                                    const EventSpec& event, const PrefixToAsMap& pfx2as) {
    std::vector<AsId> shared;
    for (AsId as : event.victim_upstreams)
        if (in_set(event.hijacker_upstreams, as)) shared.push_back(as);

    Classification out;
    out.monitors.label = "traceroutes";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TracerouteRecord& rec = records[i];
        if (rec.hops.empty()) {
            out.record_errors.push_back("record " + std::to_string(i) + ": no hops");
            continue;
        }
        // position of the first hop inside the hijacked prefix
        std::size_t entry = rec.hops.size();
        std::vector<std::optional<Ipv4>> parsed(rec.hops.size());
        for (std::size_t h = 0; h < rec.hops.size(); ++h) {
            try {
                parsed[h] = parse_ipv4(rec.hops[h]);
            } catch (const ParseError&) {
                parsed[h] = std::nullopt;  // '*' or unresolvable hop
            }
            if (parsed[h] && event.hijacked_prefix.contains(*parsed[h]) &&
                entry == rec.hops.size())
                entry = h;
        }
        if (entry == rec.hops.size()) {
            ++out.no_inference;
            out.record_errors.push_back("record " + std::to_string(i) +
                                        ": destination prefix never reached");
            continue;
        }
        if (entry == 0) {
            ++out.no_inference;
            continue;
        }
        // last hop before the destination prefix that resolves to an AS
        std::optional<bool> infected;
        bool resolved_any = false;
        for (std::size_t h = entry; h-- > 0;) {
            if (!parsed[h]) continue;
            const std::vector<AsId>& origins = pfx2as.lookup(*parsed[h]);
            if (origins.empty()) continue;
            resolved_any = true;
            bool any_shared = false, any_h = false, any_v = false;
            for (AsId as : origins) {
                if (in_set(shared, as)) any_shared = true;
                else if (in_set(event.hijacker_upstreams, as)) any_h = true;
                else if (in_set(event.victim_upstreams, as)) any_v = true;
            }
            if (!any_shared) {
                if (any_h && !any_v) infected = true;
                if (any_v && !any_h) infected = false;
            }
            break;  // only the final resolvable hop counts
        }
        if (!infected.has_value()) {
            ++out.no_inference;
            if (!resolved_any)
                out.record_errors.push_back("record " + std::to_string(i) +
                                            ": no resolvable hop before the destination");
            continue;
        }
        out.monitors.members.push_back(rec.monitor);
        out.values.values.push_back(*infected ? 1 : 0);
    }
    return out;
}

std::vector<BgpPathRecord> parse_bgp_path_records(std::istream& in) {
    std::vector<BgpPathRecord> records;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            BgpPathRecord rec;
            rec.monitor = j.at("monitor").get<AsId>();
            rec.path = j.at("path").get<std::vector<AsId>>();
            records.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad path record: ") + e.what(), lineno);
        }
    }
    return records;
}

std::vector<TracerouteRecord> parse_traceroute_records(std::istream& in) {
    std::vector<TracerouteRecord> records;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            TracerouteRecord rec;
            rec.monitor = j.at("monitor").get<AsId>();
            rec.hops = j.at("hops").get<std::vector<std::string>>();
            records.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad traceroute record: ") + e.what(), lineno);
        }
    }
    return records;
}

EventSpec parse_event_spec(const std::string& json_text) {
    EventSpec event;
    try {
        nlohmann::json j = nlohmann::json::parse(json_text);
        event.victim = j.at("victim").get<AsId>();
        event.hijacker = j.at("hijacker").get<AsId>();
        if (j.contains("prefix"))
            event.hijacked_prefix = parse_ipv4_prefix(j.at("prefix").get<std::string>());
        event.victim_upstreams =
            j.value("victim_upstreams", std::vector<AsId>{});
        event.hijacker_upstreams =
            j.value("hijacker_upstreams", std::vector<AsId>{});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad event spec: ") + e.what());
    }
    if (event.victim == 0 || event.hijacker == 0 || event.victim == event.hijacker)
        throw DataError("event spec needs distinct positive victim and hijacker ASNs");
    return event;
}

std::string classification_to_json(const Classification& c) {
    nlohmann::ordered_json j;
    j["monitors"] = c.monitors.members;
    j["m"] = c.values.values;
    j["corrupted"] = c.values.corrupted;
    j["no_inference"] = c.no_inference;
    j["record_errors"] = c.record_errors;
    return j.dump();
}

std::string ping_targets_to_jsonl(const PingTargetList& list) {
    std::ostringstream out;
    for (const auto& [as, targets] : list.targets) {
        nlohmann::ordered_json j;
        j["asn"] = as;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const PingTarget& t : targets) {
            nlohmann::ordered_json o;
            o["ip"] = format_ipv4(t.ip);
            o["score"] = t.score;
            arr.push_back(std::move(o));
        }
        j["targets"] = std::move(arr);
        out << j.dump() << '\n';
    }
    nlohmann::ordered_json diag;
    diag["diagnostics"] = {{"malformed_lines", list.malformed_lines},
                           {"below_threshold", list.below_threshold},
                           {"unmatched_ips", list.unmatched_ips},
                           {"ases_without_targets", list.ases_without_targets}};
    out << diag.dump() << '\n';
    return out.str();
}

}  // namespace bgpimpact
