#ifndef PFNC_NETWORK_HPP
#define PFNC_NETWORK_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pfnc {

/// Alphabet size of a message or edge: either a fixed integer or the
/// common default size k chosen at solve time.
class SizeSpec {
public:
    SizeSpec() = default;

    static SizeSpec fixed(std::uint32_t value)
    {
        if (value == 0)
            throw std::invalid_argument("size must be >=1 or null(default)");
        SizeSpec s;
        s.value_ = value;
        return s;
    }
    static SizeSpec default_size() { return SizeSpec{}; }

    bool is_default() const noexcept { return !value_.has_value(); }
    bool is_fixed() const noexcept { return value_.has_value(); }
    std::uint32_t value() const { return value_.value(); }

    std::uint64_t resolve(std::uint64_t k) const
    {
        if (k == 0)
            throw std::invalid_argument("default size k must be >= 1");
        return value_ ? *value_ : k;
    }

    std::string label() const { return value_ ? std::to_string(*value_) : std::string("k"); }

    friend bool operator==(const SizeSpec&, const SizeSpec&) = default;

private:
    std::optional<std::uint32_t> value_;
};

inline std::uint64_t resolve_size(const SizeSpec& spec, std::uint64_t k) { return spec.resolve(k); }

struct Node {
    std::string id;
    bool broadcast = false;

    friend bool operator==(const Node&, const Node&) = default;
};

/// A directed edge. `unlimited` marks an edge drawn without a size label;
/// such an edge resolves to the product of all message sizes and is
/// materialized into ordinary edges by canonicalize().
struct Edge {
    std::string id;
    std::string tail;
    std::string head;
    SizeSpec size;
    bool unlimited = false;

    friend bool operator==(const Edge&, const Edge&) = default;
};

using MessageSet = std::set<int>; // 1-based message indices

struct Network {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<SizeSpec> messages;          // index i-1 holds message i
    std::vector<std::string> message_names;  // optional, empty or one per message
    std::map<std::string, MessageSet> sources;
    std::map<std::string, MessageSet> demands;

    int message_count() const noexcept { return static_cast<int>(messages.size()); }

    const Node* find_node(const std::string& id) const
    {
        for (const auto& n : nodes)
            if (n.id == id)
                return &n;
        return nullptr;
    }
    Node* find_node(const std::string& id)
    {
        for (auto& n : nodes)
            if (n.id == id)
                return &n;
        return nullptr;
    }
    const Edge* find_edge(const std::string& id) const
    {
        for (const auto& e : edges)
            if (e.id == id)
                return &e;
        return nullptr;
    }

    const MessageSet& sources_of(const std::string& node) const
    {
        static const MessageSet empty;
        auto it = sources.find(node);
        return it == sources.end() ? empty : it->second;
    }
    const MessageSet& demands_of(const std::string& node) const
    {
        static const MessageSet empty;
        auto it = demands.find(node);
        return it == demands.end() ? empty : it->second;
    }

    std::string message_name(int index) const
    {
        if (index >= 1 && index <= static_cast<int>(message_names.size()) && !message_names[index - 1].empty())
            return message_names[index - 1];
        return "M" + std::to_string(index);
    }

    /// In-edges of `node` sorted by edge id.
    std::vector<const Edge*> in_edges(const std::string& node) const
    {
        std::vector<const Edge*> out;
        for (const auto& e : edges)
            if (e.head == node)
                out.push_back(&e);
        std::sort(out.begin(), out.end(), [](const Edge* a, const Edge* b) { return a->id < b->id; });
        return out;
    }
    std::vector<const Edge*> out_edges(const std::string& node) const
    {
        std::vector<const Edge*> out;
        for (const auto& e : edges)
            if (e.tail == node)
                out.push_back(&e);
        std::sort(out.begin(), out.end(), [](const Edge* a, const Edge* b) { return a->id < b->id; });
        return out;
    }

    friend bool operator==(const Network&, const Network&) = default;
};

struct Violation {
    std::string rule;
    std::string element;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    void add(std::string rule, std::string element) { violations.push_back({std::move(rule), std::move(element)}); }
    bool has(const std::string& rule) const
    {
        return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
    }
};

namespace detail {

// Kahn's algorithm with a lexicographic ready queue. Returns the nodes that
// could be ordered; a result shorter than the node list means a cycle.
inline std::vector<std::string> kahn_order(const Network& net)
{
    std::map<std::string, int> indegree;
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& n : net.nodes)
        indegree[n.id] = 0;
    for (const auto& e : net.edges) {
        if (!indegree.count(e.tail) || !indegree.count(e.head))
            continue;
        ++indegree[e.head];
        succ[e.tail].push_back(e.head);
    }
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& [id, d] : indegree)
        if (d == 0)
            ready.push(id);
    std::vector<std::string> order;
    order.reserve(indegree.size());
    while (!ready.empty()) {
        std::string id = ready.top();
        ready.pop();
        order.push_back(id);
        for (const auto& h : succ[id])
            if (--indegree[h] == 0)
                ready.push(h);
    }
    return order;
}

} // namespace detail

/// Structural checks. Never throws; every problem is reported.
inline ValidationReport validate(const Network& net)
{
    ValidationReport report;
    std::set<std::string> ids;
    for (const auto& n : net.nodes) {
        if (n.id.empty())
            report.add("empty node id", "");
        if (!ids.insert(n.id).second)
            report.add("duplicate node", n.id);
    }
    std::set<std::string> edge_ids;
    for (const auto& e : net.edges) {
        if (!edge_ids.insert(e.id).second)
            report.add("duplicate edge", e.id);
        if (!ids.count(e.tail))
            report.add("unknown endpoint", e.id + ":" + e.tail);
        if (!ids.count(e.head))
            report.add("unknown endpoint", e.id + ":" + e.head);
        if (e.tail == e.head)
            report.add("cycle", e.id);
    }
    if (!net.message_names.empty() && net.message_names.size() != net.messages.size())
        report.add("message names", "count mismatch");

    auto check_indices = [&](const std::map<std::string, MessageSet>& m, const char* what) {
        for (const auto& [node, set] : m) {
            if (!ids.count(node))
                report.add(std::string("unknown ") + what + " node", node);
            for (int i : set)
                if (i < 1 || i > net.message_count())
                    report.add("message index out of range", node + ":" + std::to_string(i));
        }
    };
    check_indices(net.sources, "source");
    check_indices(net.demands, "demand");

    if (detail::kahn_order(net).size() != net.nodes.size() && !report.has("cycle"))
        report.add("cycle", "edge relation is not acyclic");

    for (const auto& n : net.nodes) {
        std::size_t indeg = 0;
        for (const auto& e : net.edges)
            if (e.head == n.id)
                ++indeg;
        if (n.broadcast) {
            if (indeg != 1)
                report.add("broadcast in-degree", n.id);
            if (!net.sources_of(n.id).empty() || !net.demands_of(n.id).empty())
                report.add("broadcast sources/demands", n.id);
        }
        const auto& b = net.demands_of(n.id);
        if (!b.empty() && indeg == 0) {
            const auto& a = net.sources_of(n.id);
            if (!std::includes(a.begin(), a.end(), b.begin(), b.end()))
                report.add("demand without input", n.id);
        }
    }
    return report;
}

/// Topological order, ties broken by node identifier.
inline std::vector<std::string> topo_order(const Network& net)
{
    auto order = detail::kahn_order(net);
    if (order.size() != net.nodes.size())
        throw std::invalid_argument("topo_order: network has a cycle");
    return order;
}

/// Replaces parallel edges by relayed edges and materializes unlimited edges
/// as bundles: one fixed edge sized by the product of fixed message sizes
/// plus one default-size edge per default-size message, each through its
/// own relay node. The result is a simple DAG with no unlimited edges.
inline Network canonicalize(const Network& net)
{
    if (auto r = validate(net); !r.ok())
        throw std::invalid_argument("canonicalize: invalid network (" + r.violations.front().rule + ")");

    std::uint64_t fixed_product = 1;
    int default_messages = 0;
    for (const auto& m : net.messages) {
        if (m.is_default())
            ++default_messages;
        else
            fixed_product *= m.value();
    }
    if (fixed_product > UINT32_MAX)
        throw std::overflow_error("canonicalize: fixed message product exceeds 32 bits");

    std::map<std::pair<std::string, std::string>, int> multiplicity;
    for (const auto& e : net.edges)
        ++multiplicity[{e.tail, e.head}];

    Network out;
    out.nodes = net.nodes;
    out.messages = net.messages;
    out.message_names = net.message_names;
    out.sources = net.sources;
    out.demands = net.demands;

    std::set<std::string> taken;
    for (const auto& n : net.nodes)
        taken.insert(n.id);
    for (const auto& e : net.edges)
        taken.insert(e.id);
    auto fresh = [&](const std::string& base) {
        std::string id = base;
        for (int i = 2; taken.count(id); ++i)
            id = base + "~" + std::to_string(i);
        taken.insert(id);
        return id;
    };
    auto relay = [&](const Edge& e, const std::string& tag, SizeSpec size) {
        std::string r = fresh(e.id + tag + ":relay");
        out.nodes.push_back({r, false});
        out.edges.push_back({fresh(e.id + tag + "/in"), e.tail, r, size, false});
        out.edges.push_back({fresh(e.id + tag + "/out"), r, e.head, size, false});
    };

    for (const auto& e : net.edges) {
        if (e.unlimited) {
            std::vector<SizeSpec> bundle;
            if (fixed_product > 1 || default_messages == 0)
                bundle.push_back(SizeSpec::fixed(static_cast<std::uint32_t>(fixed_product)));
            for (int i = 0; i < default_messages; ++i)
                bundle.push_back(SizeSpec::default_size());
            for (std::size_t i = 0; i < bundle.size(); ++i)
                relay(e, "/b" + std::to_string(i), bundle[i]);
        } else if (multiplicity[{e.tail, e.head}] > 1) {
            relay(e, "", e.size);
        } else {
            out.edges.push_back(e);
        }
    }

    // A bundle into a broadcast node gives it several in-edges; it is then an
    // ordinary node (which can still forward everything it receives).
    for (auto& n : out.nodes) {
        if (!n.broadcast)
            continue;
        int indeg = 0;
        for (const auto& e : out.edges)
            if (e.head == n.id)
                ++indeg;
        if (indeg != 1)
            n.broadcast = false;
    }
    return out;
}

inline bool is_simple(const Network& net)
{
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : net.edges) {
        if (e.unlimited)
            return false;
        if (!seen.insert({e.tail, e.head}).second)
            return false;
    }
    return true;
}

} // namespace pfnc

#endif // PFNC_NETWORK_HPP
