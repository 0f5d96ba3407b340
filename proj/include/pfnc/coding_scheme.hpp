#ifndef PFNC_CODING_SCHEME_HPP
#define PFNC_CODING_SCHEME_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "network.hpp"

namespace pfnc {

using Row = std::vector<std::uint32_t>;

/// Enumerates joint message tuples in lexicographic order (message 1 is the
/// most significant digit).
class TupleSpace {
public:
    TupleSpace() = default;
    explicit TupleSpace(std::vector<std::uint64_t> sizes) : sizes_(std::move(sizes))
    {
        count_ = 1;
        for (auto s : sizes_) {
            if (s == 0)
                throw std::invalid_argument("TupleSpace: zero-size coordinate");
            if (count_ > limit / s)
                throw std::length_error("TupleSpace: tuple space too large");
            count_ *= s;
        }
        stride_.assign(sizes_.size(), 1);
        for (std::size_t i = sizes_.size(); i-- > 1;)
            stride_[i - 1] = stride_[i] * sizes_[i];
    }

    static constexpr std::uint64_t limit = std::uint64_t{1} << 26;

    std::uint64_t count() const noexcept { return count_; }
    std::size_t arity() const noexcept { return sizes_.size(); }
    const std::vector<std::uint64_t>& sizes() const noexcept { return sizes_; }

    std::uint32_t coordinate(std::uint64_t t, std::size_t i) const
    {
        return static_cast<std::uint32_t>((t / stride_[i]) % sizes_[i]);
    }
    Row tuple(std::uint64_t t) const
    {
        Row r(sizes_.size());
        for (std::size_t i = 0; i < sizes_.size(); ++i)
            r[i] = coordinate(t, i);
        return r;
    }
    std::uint64_t index(const Row& r) const
    {
        std::uint64_t t = 0;
        for (std::size_t i = 0; i < sizes_.size(); ++i)
            t += r[i] * stride_[i];
        return t;
    }

private:
    std::vector<std::uint64_t> sizes_;
    std::vector<std::uint64_t> stride_;
    std::uint64_t count_ = 1;
};

inline std::vector<std::uint64_t> resolved_message_sizes(const Network& net, std::uint64_t k)
{
    std::vector<std::uint64_t> out;
    for (const auto& m : net.messages)
        out.push_back(m.resolve(k));
    return out;
}

inline std::uint64_t message_space_size(const Network& net, std::uint64_t k)
{
    std::uint64_t p = 1;
    for (const auto& m : net.messages) {
        auto s = m.resolve(k);
        if (p > std::numeric_limits<std::uint32_t>::max() / s)
            throw std::overflow_error("product of message sizes exceeds 32 bits");
        p *= s;
    }
    return p;
}

/// Resolved alphabet of an edge; unlimited edges get the product of all
/// message sizes, which always suffices to forward everything.
inline std::uint64_t resolved_edge_size(const Network& net, const Edge& e, std::uint64_t k)
{
    return e.unlimited ? message_space_size(net, k) : e.size.resolve(k);
}

/// Input radices of node-local functions: the node's source messages in
/// ascending index order, then its in-edges ordered by edge id.
inline std::vector<std::uint64_t> input_radices(const Network& net, const std::string& node, std::uint64_t k)
{
    std::vector<std::uint64_t> r;
    for (int i : net.sources_of(node))
        r.push_back(net.messages.at(i - 1).resolve(k));
    for (const Edge* e : net.in_edges(node))
        r.push_back(resolved_edge_size(net, *e, k));
    return r;
}

/// Encoding table: total function over the product of `radices`; inputs not
/// listed in `entries` map to 0.
struct Table {
    std::vector<std::uint64_t> radices;
    std::uint64_t codomain = 1;
    std::map<Row, std::uint32_t> entries;

    std::uint32_t at(const Row& in) const
    {
        auto it = entries.find(in);
        return it == entries.end() ? 0u : it->second;
    }
    std::uint64_t domain_size() const
    {
        std::uint64_t d = 1;
        for (auto r : radices) {
            if (d > TupleSpace::limit / r)
                return std::numeric_limits<std::uint64_t>::max();
            d *= r;
        }
        return d;
    }

    friend bool operator==(const Table&, const Table&) = default;
};

/// Decoding table: maps a node's input tuple to its demanded message tuple
/// (ascending message index); unlisted inputs decode to all zeros.
struct DecodeTable {
    std::vector<std::uint64_t> radices;
    std::vector<int> outputs; // demanded message indices
    std::map<Row, Row> entries;

    Row at(const Row& in) const
    {
        auto it = entries.find(in);
        return it == entries.end() ? Row(outputs.size(), 0) : it->second;
    }

    friend bool operator==(const DecodeTable&, const DecodeTable&) = default;
};

struct CodingScheme {
    std::uint64_t k = 1;
    std::map<std::string, Table> encodings;
    std::map<std::string, DecodeTable> decodings;

    friend bool operator==(const CodingScheme&, const CodingScheme&) = default;
};

/// Signal values on every edge for every message tuple.
struct Evaluation {
    Evaluation() = default;
    Evaluation(Evaluation&&) = default;
    Evaluation& operator=(Evaluation&&) = default;
    Evaluation(const Evaluation&) = delete; // the input cache points into `signals`
    Evaluation& operator=(const Evaluation&) = delete;

    TupleSpace space;
    std::vector<std::string> edge_order;               // topological edge order
    std::map<std::string, std::vector<std::uint32_t>> signals; // edge id -> value per tuple

    Row node_input(const Network& net, const std::string& node, std::uint64_t t) const
    {
        auto it = inputs_.find(node);
        if (it == inputs_.end()) {
            std::vector<const std::vector<std::uint32_t>*> cols;
            for (const Edge* e : net.in_edges(node))
                cols.push_back(&signals.at(e->id));
            it = inputs_.emplace(node, std::move(cols)).first;
        }
        Row in;
        for (int i : net.sources_of(node))
            in.push_back(space.coordinate(t, static_cast<std::size_t>(i - 1)));
        for (const auto* col : it->second)
            in.push_back((*col)[t]);
        return in;
    }

private:
    // Cached per-node in-edge columns; only valid once those edges are filled.
    mutable std::map<std::string, std::vector<const std::vector<std::uint32_t>*>> inputs_;
};

/// Edges ordered by topological position of their tail, then by id.
inline std::vector<const Edge*> edge_order(const Network& net)
{
    auto order = topo_order(net);
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i)
        pos[order[i]] = i;
    std::vector<const Edge*> edges;
    for (const auto& e : net.edges)
        edges.push_back(&e);
    std::sort(edges.begin(), edges.end(), [&](const Edge* a, const Edge* b) {
        auto pa = pos[a->tail], pb = pos[b->tail];
        return pa != pb ? pa < pb : a->id < b->id;
    });
    return edges;
}

/// Runs every encoding table on every message tuple. Missing tables throw.
inline Evaluation evaluate(const Network& net, const CodingScheme& scheme)
{
    Evaluation ev;
    ev.space = TupleSpace(resolved_message_sizes(net, scheme.k));
    for (const Edge* e : edge_order(net)) {
        auto it = scheme.encodings.find(e->id);
        if (it == scheme.encodings.end())
            throw std::invalid_argument("scheme has no encoding for edge " + e->id);
        std::vector<std::uint32_t> values(ev.space.count());
        for (std::uint64_t t = 0; t < ev.space.count(); ++t)
            values[t] = it->second.at(ev.node_input(net, e->tail, t));
        ev.signals[e->id] = std::move(values);
        ev.edge_order.push_back(e->id);
    }
    return ev;
}

/// Exhaustively checks a scheme: table shapes, output ranges, and decoding at
/// every demand node for every message tuple.
inline ValidationReport verify_scheme(const Network& net, const CodingScheme& scheme)
{
    ValidationReport report;
    if (auto r = validate(net); !r.ok()) {
        for (auto& v : r.violations)
            report.add("network: " + v.rule, v.element);
        return report;
    }
    if (scheme.k == 0) {
        report.add("k", "k must be >= 1");
        return report;
    }
    std::uint64_t count = 0;
    try {
        count = TupleSpace(resolved_message_sizes(net, scheme.k)).count();
    } catch (const std::exception& ex) {
        report.add("too large", ex.what());
        return report;
    }
    (void)count;

    for (const auto& e : net.edges) {
        auto it = scheme.encodings.find(e.id);
        if (it == scheme.encodings.end()) {
            report.add("missing encoding", e.id);
            continue;
        }
        const Table& tab = it->second;
        if (tab.radices != input_radices(net, e.tail, scheme.k))
            report.add("domain", e.id);
        if (tab.codomain != resolved_edge_size(net, e, scheme.k))
            report.add("codomain", e.id);
        for (const auto& [in, out] : tab.entries)
            if (out >= resolved_edge_size(net, e, scheme.k)) {
                report.add("range", e.id);
                break;
            }
    }
    for (const auto& [id, tab] : scheme.encodings)
        if (!net.find_edge(id))
            report.add("unknown edge", id);
    if (!report.ok())
        return report;

    Evaluation ev = evaluate(net, scheme);
    for (const auto& n : net.nodes) {
        const auto& b = net.demands_of(n.id);
        if (b.empty())
            continue;
        auto it = scheme.decodings.find(n.id);
        if (it == scheme.decodings.end()) {
            report.add("missing decoding", n.id);
            continue;
        }
        const DecodeTable& dec = it->second;
        if (dec.outputs != std::vector<int>(b.begin(), b.end())) {
            report.add("decoding outputs", n.id);
            continue;
        }
        for (std::uint64_t t = 0; t < ev.space.count(); ++t) {
            Row want;
            for (int i : b)
                want.push_back(ev.space.coordinate(t, static_cast<std::size_t>(i - 1)));
            if (dec.at(ev.node_input(net, n.id, t)) != want) {
                report.add("decode", n.id);
                break;
            }
        }
    }
    return report;
}

// Witness documents ------------------------------------------------------

namespace detail {
inline void for_each_row(const std::vector<std::uint64_t>& radices, const auto& fn)
{
    TupleSpace dom(radices);
    for (std::uint64_t i = 0; i < dom.count(); ++i)
        fn(dom.tuple(i));
}
} // namespace detail

/// {"k":int, "encodings":{edge:[...]}, "decodings":{node:[[...],...]}}; rows
/// are dense and row-major over the input domain (source messages ascending,
/// then in-edges by edge id, first input most significant).
inline nlohmann::json scheme_to_json(const CodingScheme& s)
{
    nlohmann::json j;
    j["k"] = s.k;
    j["encodings"] = nlohmann::json::object();
    for (const auto& [id, tab] : s.encodings) {
        auto arr = nlohmann::json::array();
        detail::for_each_row(tab.radices, [&](const Row& r) { arr.push_back(tab.at(r)); });
        j["encodings"][id] = arr;
    }
    j["decodings"] = nlohmann::json::object();
    for (const auto& [id, dec] : s.decodings) {
        auto arr = nlohmann::json::array();
        detail::for_each_row(dec.radices, [&](const Row& r) { arr.push_back(dec.at(r)); });
        j["decodings"][id] = arr;
    }
    return j;
}

/// Rebuilds a scheme from its witness document; shapes come from `net`.
inline CodingScheme scheme_from_json(const Network& net, const nlohmann::json& j)
{
    CodingScheme s;
    if (!j.contains("k") || !j["k"].is_number_integer() || j["k"].get<long long>() < 1)
        throw std::invalid_argument("witness: k must be a positive integer");
    s.k = j["k"].get<std::uint64_t>();
    for (const auto& e : net.edges) {
        if (!j["encodings"].contains(e.id))
            continue;
        const auto& arr = j["encodings"][e.id];
        Table tab;
        tab.radices = input_radices(net, e.tail, s.k);
        tab.codomain = resolved_edge_size(net, e, s.k);
        std::size_t i = 0;
        detail::for_each_row(tab.radices, [&](const Row& r) {
            auto v = arr.at(i++).get<std::uint32_t>();
            if (v != 0)
                tab.entries[r] = v;
        });
        s.encodings[e.id] = std::move(tab);
    }
    for (const auto& n : net.nodes) {
        if (!j["decodings"].contains(n.id))
            continue;
        const auto& arr = j["decodings"][n.id];
        DecodeTable dec;
        dec.radices = input_radices(net, n.id, s.k);
        const auto& b = net.demands_of(n.id);
        dec.outputs.assign(b.begin(), b.end());
        std::size_t i = 0;
        detail::for_each_row(dec.radices, [&](const Row& r) {
            Row v = arr.at(i++).get<Row>();
            if (v != Row(dec.outputs.size(), 0))
                dec.entries[r] = v;
        });
        s.decodings[n.id] = std::move(dec);
    }
    return s;
}

} // namespace pfnc

#endif // PFNC_CODING_SCHEME_HPP
