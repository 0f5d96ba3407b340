// Shared fixtures and brute-force oracles for the unit and acceptance tests.
// The oracles here deliberately avoid the library's search code paths.
#ifndef PFNC_TESTS_SUPPORT_HPP
#define PFNC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <pfnc/coding_scheme.hpp>
#include <pfnc/network.hpp>

namespace pfnc::fixtures {

/// Classic butterfly: s holds both messages, t1 wants M2, t2 wants M1, and
/// c -> d is the shared bottleneck.
inline Network butterfly(SizeSpec size = SizeSpec::default_size())
{
    Network n;
    for (const char* id : {"s", "a", "b", "c", "d", "t1", "t2"})
        n.nodes.push_back({id, false});
    auto edge = [&](const char* id, const char* t, const char* h) { n.edges.push_back({id, t, h, size, false}); };
    edge("sa", "s", "a");
    edge("sb", "s", "b");
    edge("ac", "a", "c");
    edge("bc", "b", "c");
    edge("cd", "c", "d");
    edge("dt1", "d", "t1");
    edge("dt2", "d", "t2");
    edge("at1", "a", "t1");
    edge("bt2", "b", "t2");
    n.messages = {size, size};
    n.sources["s"] = {1, 2};
    n.demands["t1"] = {2};
    n.demands["t2"] = {1};
    return n;
}

inline Table table_from(std::vector<std::uint64_t> radices, std::uint64_t codomain,
                        const std::function<std::uint32_t(const Row&)>& f)
{
    Table t;
    t.radices = radices;
    t.codomain = codomain;
    TupleSpace space(radices);
    for (std::uint64_t i = 0; i < space.count(); ++i) {
        Row r = space.tuple(i);
        t.entries[r] = f(r);
    }
    return t;
}

inline DecodeTable decode_from(std::vector<std::uint64_t> radices, std::vector<int> outputs,
                               const std::function<Row(const Row&)>& f)
{
    DecodeTable d;
    d.radices = radices;
    d.outputs = outputs;
    TupleSpace space(radices);
    for (std::uint64_t i = 0; i < space.count(); ++i) {
        Row r = space.tuple(i);
        d.entries[r] = f(r);
    }
    return d;
}

/// The binary XOR code on the butterfly. `bottleneck` overrides c -> d.
inline CodingScheme butterfly_xor(std::optional<std::function<std::uint32_t(const Row&)>> bottleneck = std::nullopt)
{
    CodingScheme s;
    s.k = 2;
    auto pick = [](std::size_t i) { return [i](const Row& r) { return r[i]; }; };
    s.encodings["sa"] = table_from({2, 2}, 2, pick(0));
    s.encodings["sb"] = table_from({2, 2}, 2, pick(1));
    s.encodings["ac"] = table_from({2}, 2, pick(0));
    s.encodings["at1"] = table_from({2}, 2, pick(0));
    s.encodings["bc"] = table_from({2}, 2, pick(0));
    s.encodings["bt2"] = table_from({2}, 2, pick(0));
    s.encodings["cd"] = table_from({2, 2}, 2, bottleneck ? *bottleneck : [](const Row& r) { return r[0] ^ r[1]; });
    s.encodings["dt1"] = table_from({2}, 2, pick(0));
    s.encodings["dt2"] = table_from({2}, 2, pick(0));
    // t1 reads (at1, dt1), t2 reads (bt2, dt2): both recover the other bit by XOR.
    s.decodings["t1"] = decode_from({2, 2}, {2}, [](const Row& r) { return Row{r[0] ^ r[1]}; });
    s.decodings["t2"] = decode_from({2, 2}, {1}, [](const Row& r) { return Row{r[0] ^ r[1]}; });
    return s;
}

/// A size-3 message squeezed through a size-2 edge.
inline Network pigeonhole()
{
    Network n;
    n.nodes = {{"s", false}, {"t", false}};
    n.edges = {{"st", "s", "t", SizeSpec::fixed(2), false}};
    n.messages = {SizeSpec::fixed(3)};
    n.sources["s"] = {1};
    n.demands["t"] = {1};
    return n;
}

/// Brute force over every raw encoding table of every edge. Returns nullopt
/// when the instance is too large to enumerate within `cap` table tuples.
inline std::optional<bool> naive_solvable(const Network& net, std::uint64_t k, std::uint64_t cap = 300000)
{
    std::vector<std::uint64_t> msizes;
    for (const auto& m : net.messages)
        msizes.push_back(m.resolve(k));
    std::uint64_t T = 1;
    for (auto s : msizes)
        T *= s;
    auto esize = [&](const Edge& e) { return e.unlimited ? T : e.size.resolve(k); };

    // Topological edge order by repeated relaxation; nets here are tiny.
    std::vector<const Edge*> order;
    std::map<std::string, bool> done;
    for (const auto& n : net.nodes)
        done[n.id] = false;
    while (order.size() < net.edges.size()) {
        bool progress = false;
        for (const auto& n : net.nodes) {
            if (done[n.id])
                continue;
            bool ready = true;
            for (const auto& e : net.edges)
                if (e.head == n.id && !done[e.tail])
                    ready = false;
            if (!ready)
                continue;
            done[n.id] = true;
            progress = true;
            for (const auto& e : net.edges)
                if (e.tail == n.id)
                    order.push_back(&e);
        }
        if (!progress)
            return std::nullopt;
    }
    auto inputs_of = [&](const std::string& node) {
        std::vector<const Edge*> in;
        for (const auto& e : net.edges)
            if (e.head == node)
                in.push_back(&e);
        std::sort(in.begin(), in.end(), [](auto a, auto b) { return a->id < b->id; });
        return in;
    };

    std::vector<std::uint64_t> domain(order.size()), codomain(order.size());
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::uint64_t d = 1;
        for (int m : net.sources_of(order[i]->tail))
            d *= msizes[m - 1];
        for (const Edge* in : inputs_of(order[i]->tail))
            d *= esize(*in);
        domain[i] = d;
        codomain[i] = esize(*order[i]);
        for (std::uint64_t j = 0; j < d; ++j) {
            combos *= codomain[i];
            if (combos > cap)
                return std::nullopt;
        }
    }

    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i)
        pos[order[i]->id] = i;
    std::vector<std::vector<std::uint64_t>> tables(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        tables[i].assign(domain[i], 0);

    auto tuple_of = [&](std::uint64_t t) {
        std::vector<std::uint64_t> m(msizes.size());
        for (std::size_t i = msizes.size(); i-- > 0;) {
            m[i] = t % msizes[i];
            t /= msizes[i];
        }
        return m;
    };
    auto input_index = [&](const std::string& node, const std::vector<std::uint64_t>& msg,
                           const std::vector<std::uint64_t>& sig) {
        std::uint64_t idx = 0;
        for (int m : net.sources_of(node))
            idx = idx * msizes[m - 1] + msg[m - 1];
        for (const Edge* in : inputs_of(node))
            idx = idx * esize(*in) + sig[pos[in->id]];
        return idx;
    };

    for (;;) {
        // Evaluate and check every demand node.
        std::map<std::string, std::map<std::uint64_t, std::vector<std::uint64_t>>> seen;
        bool ok = true;
        for (std::uint64_t t = 0; t < T && ok; ++t) {
            auto msg = tuple_of(t);
            std::vector<std::uint64_t> sig(order.size());
            for (std::size_t i = 0; i < order.size(); ++i)
                sig[i] = tables[i][input_index(order[i]->tail, msg, sig)];
            for (const auto& [node, b] : net.demands) {
                if (b.empty())
                    continue;
                std::vector<std::uint64_t> want;
                for (int m : b)
                    want.push_back(msg[m - 1]);
                auto [it, fresh] = seen[node].emplace(input_index(node, msg, sig), want);
                if (!fresh && it->second != want)
                    ok = false;
            }
        }
        if (ok)
            return true;
        // Next table assignment (odometer over every entry of every table).
        std::size_t i = 0;
        for (; i < order.size(); ++i) {
            std::size_t j = 0;
            for (; j < domain[i]; ++j) {
                if (++tables[i][j] < codomain[i])
                    break;
                tables[i][j] = 0;
            }
            if (j < domain[i])
                break;
        }
        if (i == order.size())
            return false;
    }
}

/// Small random DAG: 1-2 messages, 2-4 nodes, 1-3 edges, sizes <= 3.
inline Network random_network(std::mt19937& rng)
{
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto size = [&](int max) { return pick(0, max) == 0 ? SizeSpec::default_size() : SizeSpec::fixed(pick(1, max)); };
    for (;;) {
        Network n;
        int messages = pick(1, 2);
        for (int i = 0; i < messages; ++i)
            n.messages.push_back(size(3));
        int nodes = pick(2, 4);
        for (int i = 0; i < nodes; ++i)
            n.nodes.push_back({"v" + std::to_string(i), false});
        int edges = pick(1, 3);
        for (int i = 0; i < edges; ++i) {
            int a = pick(0, nodes - 2);
            int b = pick(a + 1, nodes - 1);
            n.edges.push_back({"e" + std::to_string(i), n.nodes[a].id, n.nodes[b].id, size(3), false});
        }
        for (int m = 1; m <= messages; ++m)
            n.sources[n.nodes[pick(0, nodes - 1)].id].insert(m);
        for (int v = 1; v < nodes; ++v)
            if (pick(0, 1))
                for (int m = 1; m <= messages; ++m)
                    if (pick(0, 1))
                        n.demands[n.nodes[v].id].insert(m);
        if (validate(n).ok())
            return n;
    }
}

} // namespace pfnc::fixtures

#endif // PFNC_TESTS_SUPPORT_HPP
