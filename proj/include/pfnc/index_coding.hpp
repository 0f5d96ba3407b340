#ifndef PFNC_INDEX_CODING_HPP
#define PFNC_INDEX_CODING_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "coding_scheme.hpp"
#include "network.hpp"
#include "network_io.hpp"

namespace pfnc {

struct Client {
    MessageSet has;
    MessageSet wants;

    friend bool operator==(const Client&, const Client&) = default;
};

/// One broadcast symbol X = f(M_1..M_l) with at most a*k^b values; client j
/// holds M_{A_j} and must recover M_{B_j}.
struct IndexInstance {
    std::vector<SizeSpec> messages;
    std::uint64_t a = 1;
    std::uint64_t b = 0;
    std::vector<Client> clients;

    friend bool operator==(const IndexInstance&, const IndexInstance&) = default;
};

/// Drops demanded messages a client already holds; rejects bad indices.
inline IndexInstance normalize(IndexInstance inst)
{
    if (inst.a == 0)
        throw std::invalid_argument("index instance: a must be positive");
    const int l = static_cast<int>(inst.messages.size());
    for (std::size_t j = 0; j < inst.clients.size(); ++j) {
        auto& c = inst.clients[j];
        for (const auto* set : {&c.has, &c.wants})
            for (int i : *set)
                if (i < 1 || i > l)
                    throw std::invalid_argument("client " + std::to_string(j) + ": message index " + std::to_string(i) +
                                                " out of range");
        for (int i : c.has)
            c.wants.erase(i);
    }
    return inst;
}

/// a*k^b, saturating at `limit`.
inline std::uint64_t alphabet_bound(const IndexInstance& inst, std::uint64_t k, std::uint64_t limit = UINT64_MAX)
{
    std::uint64_t v = inst.a;
    for (std::uint64_t i = 0; i < inst.b && v < limit; ++i)
        v = v > limit / k ? limit : v * k;
    return std::min(v, limit);
}

struct Graph {
    std::vector<std::vector<std::uint32_t>> adj; // sorted neighbour lists

    std::size_t size() const { return adj.size(); }
    std::size_t edge_count() const
    {
        std::size_t e = 0;
        for (const auto& a : adj)
            e += a.size();
        return e / 2;
    }
    bool has_edge(std::uint32_t u, std::uint32_t v) const
    {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    }
};

inline Graph graph_from_edges(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
{
    Graph g;
    g.adj.resize(n);
    for (auto [u, v] : edges) {
        if (u == v || u >= n || v >= n)
            throw std::invalid_argument("graph_from_edges: bad edge");
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& a : g.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return g;
}

inline TupleSpace index_space(const IndexInstance& inst, std::uint64_t k)
{
    std::vector<std::uint64_t> sizes;
    for (const auto& s : inst.messages)
        sizes.push_back(s.resolve(k));
    return TupleSpace(sizes);
}

/// Vertices are message tuples (lexicographic); m ~ m' when some client sees
/// the same side information but wants different values.
inline Graph confusion_graph(const IndexInstance& raw, std::uint64_t k, std::uint64_t cap = 1u << 14)
{
    const auto inst = normalize(raw);
    if (k == 0)
        throw std::invalid_argument("confusion_graph: k must be >= 1");
    const auto space = index_space(inst, k);
    if (space.count() > cap)
        throw std::length_error("confusion_graph: " + std::to_string(space.count()) + " tuples exceeds the cap of " +
                                std::to_string(cap));
    auto project = [&](std::uint64_t t, const MessageSet& set) {
        Row r;
        for (int i : set)
            r.push_back(space.coordinate(t, static_cast<std::size_t>(i - 1)));
        return r;
    };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& c : inst.clients) {
        if (c.wants.empty())
            continue;
        std::map<Row, std::vector<std::uint32_t>> buckets;
        for (std::uint64_t t = 0; t < space.count(); ++t)
            buckets[project(t, c.has)].push_back(static_cast<std::uint32_t>(t));
        for (const auto& [side, members] : buckets)
            for (std::size_t i = 0; i < members.size(); ++i)
                for (std::size_t j = i + 1; j < members.size(); ++j)
                    if (project(members[i], c.wants) != project(members[j], c.wants))
                        edges.push_back({members[i], members[j]});
    }
    return graph_from_edges(space.count(), edges);
}

/// Exact decision of chi(g) <= m. Vertices are coloured in saturation
/// order (ties by degree); a greedy clique is precoloured and every other
/// vertex may open at most one new colour.
inline std::optional<std::vector<std::uint32_t>> chromatic_leq(const Graph& g, std::uint64_t m)
{
    const std::size_t n = g.size();
    if (n == 0)
        return std::vector<std::uint32_t>{};
    if (m == 0)
        return std::nullopt;
    const std::uint32_t NONE = UINT32_MAX;
    std::vector<std::uint32_t> color(n, NONE);

    std::vector<std::uint32_t> by_degree(n);
    for (std::uint32_t v = 0; v < n; ++v)
        by_degree[v] = v;
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](auto u, auto v) { return g.adj[u].size() > g.adj[v].size(); });
    std::vector<std::uint32_t> clique;
    for (auto v : by_degree)
        if (std::all_of(clique.begin(), clique.end(), [&](auto u) { return g.has_edge(u, v); }))
            clique.push_back(v);
    if (clique.size() > m)
        return std::nullopt;
    for (std::uint32_t i = 0; i < clique.size(); ++i)
        color[clique[i]] = i;
    const std::uint32_t palette = static_cast<std::uint32_t>(std::min<std::uint64_t>(m, n));

    // Each frame: vertex chosen, next colour to try, colours in use before it.
    struct Frame {
        std::uint32_t v;
        std::uint32_t next;
        std::uint32_t used;
    };
    std::vector<Frame> stack;
    std::uint32_t used = static_cast<std::uint32_t>(clique.size());
    std::size_t remaining = n - clique.size();

    auto pick = [&]() {
        std::uint32_t best = NONE;
        std::size_t best_sat = 0, best_deg = 0;
        std::vector<char> seen(palette);
        for (std::uint32_t v = 0; v < n; ++v) {
            if (color[v] != NONE)
                continue;
            std::fill(seen.begin(), seen.end(), 0);
            std::size_t sat = 0;
            for (auto u : g.adj[v])
                if (color[u] != NONE && !seen[color[u]]) {
                    seen[color[u]] = 1;
                    ++sat;
                }
            if (best == NONE || sat > best_sat || (sat == best_sat && g.adj[v].size() > best_deg)) {
                best = v;
                best_sat = sat;
                best_deg = g.adj[v].size();
            }
        }
        return best;
    };
    auto fits = [&](std::uint32_t v, std::uint32_t c) {
        return std::none_of(g.adj[v].begin(), g.adj[v].end(), [&](auto u) { return color[u] == c; });
    };

    if (remaining == 0)
        return color;
    stack.push_back({pick(), 0, used});
    while (!stack.empty()) {
        Frame& f = stack.back();
        color[f.v] = NONE;
        used = f.used;
        const std::uint32_t limit = std::min(palette, used + 1);
        while (f.next < limit && !fits(f.v, f.next))
            ++f.next;
        if (f.next >= limit) {
            stack.pop_back();
            ++remaining;
            continue;
        }
        color[f.v] = f.next++;
        used = std::max(used, color[f.v] + 1);
        if (--remaining == 0)
            return color;
        stack.push_back({pick(), 0, used});
    }
    return std::nullopt;
}

/// Checks that every client decodes from (f(m), m_A) on every tuple.
inline bool verify_index_code(const IndexInstance& raw, std::uint64_t k, const std::vector<std::uint32_t>& f)
{
    const auto inst = normalize(raw);
    const auto space = index_space(inst, k);
    if (f.size() != space.count())
        return false;
    const std::uint64_t alphabet = alphabet_bound(inst, k);
    for (auto x : f)
        if (x >= alphabet)
            return false;
    for (const auto& c : inst.clients) {
        std::map<std::pair<std::uint32_t, Row>, Row> decoder;
        for (std::uint64_t t = 0; t < space.count(); ++t) {
            Row side, want;
            for (int i : c.has)
                side.push_back(space.coordinate(t, static_cast<std::size_t>(i - 1)));
            for (int i : c.wants)
                want.push_back(space.coordinate(t, static_cast<std::size_t>(i - 1)));
            auto [it, fresh] = decoder.emplace(std::pair{f[t], side}, want);
            if (!fresh && it->second != want)
                return false;
        }
    }
    return true;
}

struct IndexResult {
    bool solvable = false;
    std::uint64_t alphabet = 0;
    std::optional<std::vector<std::uint32_t>> encoder; // f per message tuple
};

inline IndexResult solvable_at_k(const IndexInstance& inst, std::uint64_t k, std::uint64_t cap = 1u << 14)
{
    Graph g = confusion_graph(inst, k, cap);
    IndexResult r;
    r.alphabet = alphabet_bound(inst, k);
    r.encoder = chromatic_leq(g, alphabet_bound(inst, k, g.size() + 1));
    r.solvable = r.encoder.has_value();
    if (r.solvable && !verify_index_code(inst, k, *r.encoder))
        throw std::logic_error("solvable_at_k: colouring failed simulation");
    return r;
}

inline json to_json(const IndexInstance& inst)
{
    json j;
    j["messages"] = json::array();
    for (const auto& s : inst.messages)
        j["messages"].push_back(detail::size_to_json(s));
    j["a"] = inst.a;
    j["b"] = inst.b;
    j["clients"] = json::array();
    for (const auto& c : inst.clients)
        j["clients"].push_back({{"has", c.has}, {"wants", c.wants}});
    return j;
}

inline IndexInstance index_instance_from_json(const json& j)
{
    IndexInstance inst;
    const auto& msgs = detail::require(j, "messages", "instance");
    if (!msgs.is_array())
        throw DocumentError("instance.messages: expected an array");
    for (std::size_t i = 0; i < msgs.size(); ++i)
        inst.messages.push_back(detail::size_from_json(msgs[i], "messages[" + std::to_string(i) + "]"));
    for (const char* key : {"a", "b"}) {
        const auto& v = detail::require(j, key, "instance");
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw DocumentError(std::string("instance.") + key + ": expected a nonnegative integer");
    }
    inst.a = j["a"].get<std::uint64_t>();
    inst.b = j["b"].get<std::uint64_t>();
    if (inst.a == 0)
        throw DocumentError("instance.a: must be positive");
    const auto& clients = detail::require(j, "clients", "instance");
    if (!clients.is_array())
        throw DocumentError("instance.clients: expected an array");
    for (std::size_t i = 0; i < clients.size(); ++i) {
        const std::string where = "clients[" + std::to_string(i) + "]";
        Client c;
        c.has = detail::index_set_from_json(detail::require(clients[i], "has", where), where + ".has");
        c.wants = detail::index_set_from_json(detail::require(clients[i], "wants", where), where + ".wants");
        inst.clients.push_back(std::move(c));
    }
    try {
        return normalize(std::move(inst));
    } catch (const std::invalid_argument& e) {
        throw DocumentError(e.what());
    }
}

} // namespace pfnc

#endif // PFNC_INDEX_CODING_HPP
