#ifndef PFNC_SOLVER_HPP
#define PFNC_SOLVER_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "coding_scheme.hpp"
#include "network.hpp"

namespace pfnc {

struct SolveOptions {
    /// Edges whose encoding table is fixed rather than searched.
    std::map<std::string, Table> pins;
    /// Canonical-relabelling representatives and forwarding of edges wide
    /// enough to carry everything their tail knows. Both preserve the
    /// solvable/unsolvable answer; turning this off enumerates raw tables.
    bool symmetry_breaking = true;
    std::optional<std::uint64_t> node_budget;
    bool deterministic = true;
    unsigned workers = 1;
};

enum class SolveStatus { Solvable, UnsolvableAtK, BudgetExhausted };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Solvable: return "solvable";
    case SolveStatus::UnsolvableAtK: return "unsolvable_at_k";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

struct SolveOutcome {
    SolveStatus status = SolveStatus::UnsolvableAtK;
    std::optional<CodingScheme> scheme;
    std::uint64_t nodes = 0; // search nodes visited

    bool solvable() const noexcept { return status == SolveStatus::Solvable; }
};

namespace detail {

enum class EdgeKind { Pinned, Forward, Searched };

struct PlanEdge {
    const Edge* edge = nullptr;
    std::size_t tail = 0;
    std::uint64_t size = 0;
    EdgeKind kind = EdgeKind::Searched;
    bool canonical = true;   // values may be relabelled freely
    const Table* pin = nullptr;
    std::vector<int> raw_messages;         // tail's source messages (0-based)
    std::vector<std::size_t> raw_inputs;   // tail's in-edges by id (plan positions)
    std::vector<std::size_t> demands_last; // demand checks completed by this edge
};

struct PlanNode {
    std::string id;
    std::vector<int> atom_messages;        // 0-based
    std::vector<std::size_t> atom_edges;   // plan positions, ascending
};

struct PlanDemand {
    std::size_t node = 0;
    std::vector<std::uint32_t> wanted; // interned demanded tuple per message tuple
    std::optional<std::size_t> last;   // last atom edge, if any
};

/// Immutable search plan shared by all workers.
struct Plan {
    const Network* net = nullptr;
    std::uint64_t k = 1;
    TupleSpace space;
    std::vector<std::vector<std::uint32_t>> message_values; // per message, per tuple
    std::vector<std::uint64_t> message_sizes;
    std::vector<PlanNode> nodes;
    std::map<std::string, std::size_t> node_index;
    std::vector<PlanEdge> edges;
    std::vector<PlanDemand> demands;
    std::vector<std::size_t> demands_upfront; // checks with no atom edges
    bool symmetry = true;
};

inline Plan make_plan(const Network& net, std::uint64_t k, const SolveOptions& opts)
{
    Plan plan;
    plan.net = &net;
    plan.k = k;
    plan.symmetry = opts.symmetry_breaking;
    plan.message_sizes = resolved_message_sizes(net, k);
    plan.space = TupleSpace(plan.message_sizes);
    const std::uint64_t T = plan.space.count();
    for (std::size_t i = 0; i < plan.message_sizes.size(); ++i) {
        std::vector<std::uint32_t> col(T);
        for (std::uint64_t t = 0; t < T; ++t)
            col[t] = plan.space.coordinate(t, i);
        plan.message_values.push_back(std::move(col));
    }

    auto order = topo_order(net);
    for (const auto& id : order) {
        plan.node_index[id] = plan.nodes.size();
        plan.nodes.push_back({id, {}, {}});
    }
    auto ordered = edge_order(net);
    std::map<std::string, std::size_t> edge_pos;
    for (std::size_t p = 0; p < ordered.size(); ++p)
        edge_pos[ordered[p]->id] = p;

    for (const auto& [id, tab] : opts.pins) {
        const Edge* e = net.find_edge(id);
        if (!e)
            throw std::invalid_argument("pin for unknown edge " + id);
        if (tab.radices != input_radices(net, e->tail, k) || tab.codomain != resolved_edge_size(net, *e, k))
            throw std::invalid_argument("pinned table for " + id + " does not match resolved sizes");
        for (const auto& [in, v] : tab.entries)
            if (v >= tab.codomain)
                throw std::invalid_argument("pinned table for " + id + " has an out-of-range entry");
    }

    // Tails of pinned edges read raw values, so edges into them keep their labels.
    std::set<std::string> pinned_tails;
    for (const auto& [id, tab] : opts.pins)
        pinned_tails.insert(net.find_edge(id)->tail);

    plan.edges.resize(ordered.size());
    for (std::size_t p = 0; p < ordered.size(); ++p) {
        PlanEdge& pe = plan.edges[p];
        pe.edge = ordered[p];
        pe.tail = plan.node_index.at(pe.edge->tail);
        pe.size = resolved_edge_size(net, *pe.edge, k);
        if (auto it = opts.pins.find(pe.edge->id); it != opts.pins.end()) {
            pe.kind = EdgeKind::Pinned;
            pe.pin = &it->second;
        }
        pe.canonical = opts.symmetry_breaking && !pinned_tails.count(pe.edge->head);
        for (int m : net.sources_of(pe.edge->tail))
            pe.raw_messages.push_back(m - 1);
        for (const Edge* in : net.in_edges(pe.edge->tail))
            pe.raw_inputs.push_back(edge_pos.at(in->id));
    }

    // Knowledge atoms, closed through forwarding edges; nodes in topo order so
    // every tail is finished before its out-edges are classified.
    for (auto& node : plan.nodes) {
        std::set<int> msgs;
        std::set<std::size_t> atoms;
        for (int m : net.sources_of(node.id))
            msgs.insert(m - 1);
        for (const Edge* in : net.in_edges(node.id)) {
            const PlanEdge& pe = plan.edges[edge_pos.at(in->id)];
            if (pe.kind == EdgeKind::Forward) {
                const PlanNode& tail = plan.nodes[pe.tail];
                msgs.insert(tail.atom_messages.begin(), tail.atom_messages.end());
                atoms.insert(tail.atom_edges.begin(), tail.atom_edges.end());
            } else {
                atoms.insert(edge_pos.at(in->id));
            }
        }
        node.atom_messages.assign(msgs.begin(), msgs.end());
        node.atom_edges.assign(atoms.begin(), atoms.end());

        std::uint64_t bound = 1;
        for (int m : node.atom_messages)
            bound = std::min(T, bound * plan.message_sizes[m]);
        for (auto a : node.atom_edges)
            bound = std::min(T, bound * plan.edges[a].size);
        for (const Edge* out : net.out_edges(node.id)) {
            PlanEdge& pe = plan.edges[edge_pos.at(out->id)];
            if (pe.kind != EdgeKind::Pinned && pe.canonical && (out->unlimited || pe.size >= bound))
                pe.kind = EdgeKind::Forward;
        }
    }

    for (const auto& node : plan.nodes) {
        const auto& b = net.demands_of(node.id);
        if (b.empty())
            continue;
        PlanDemand d;
        d.node = plan.node_index.at(node.id);
        std::map<Row, std::uint32_t> ids;
        d.wanted.resize(T);
        for (std::uint64_t t = 0; t < T; ++t) {
            Row key;
            for (int m : b)
                key.push_back(plan.space.coordinate(t, static_cast<std::size_t>(m - 1)));
            d.wanted[t] = ids.emplace(key, static_cast<std::uint32_t>(ids.size())).first->second;
        }
        if (!node.atom_edges.empty())
            d.last = node.atom_edges.back();
        std::size_t di = plan.demands.size();
        if (d.last)
            plan.edges[*d.last].demands_last.push_back(di);
        else
            plan.demands_upfront.push_back(di);
        plan.demands.push_back(std::move(d));
    }
    return plan;
}

// Refines a partition of the tuple space by value columns. Labels come out
// in first-occurrence order.
class Partition {
public:
    explicit Partition(std::uint64_t n) : cls_(n, 0), count_(n ? 1 : 0) {}

    void refine(const std::vector<std::uint32_t>& column, std::uint64_t radix)
    {
        const std::uint64_t span = count_ * radix;
        if (span <= (std::uint64_t{1} << 22)) {
            std::vector<std::uint32_t> remap(span, UINT32_MAX);
            std::uint32_t next = 0;
            for (std::size_t t = 0; t < cls_.size(); ++t) {
                auto key = cls_[t] * radix + column[t];
                if (remap[key] == UINT32_MAX)
                    remap[key] = next++;
                cls_[t] = remap[key];
            }
            count_ = next;
        } else {
            std::unordered_map<std::uint64_t, std::uint32_t> remap;
            for (std::size_t t = 0; t < cls_.size(); ++t) {
                auto key = cls_[t] * radix + column[t];
                auto [it, fresh] = remap.emplace(key, static_cast<std::uint32_t>(remap.size()));
                cls_[t] = it->second;
            }
            count_ = remap.size();
        }
    }

    const std::vector<std::uint32_t>& classes() const noexcept { return cls_; }
    std::uint64_t count() const noexcept { return count_; }

private:
    std::vector<std::uint32_t> cls_;
    std::uint64_t count_;
};

class Search {
public:
    Search(const Plan& plan, std::optional<std::uint64_t> budget, std::size_t limit)
        : plan_(plan), budget_(budget), limit_(limit), values_(plan.edges.size())
    {
    }

    /// Runs the search; true when stopped early (limit or budget).
    bool run()
    {
        for (auto d : plan_.demands_upfront)
            if (!full_check(d))
                return false;
        return dfs(0);
    }

    void set_shared_counter(std::atomic<std::uint64_t>* shared) { shared_ = shared; }
    void collect_split_choices() { collect_split_ = true; }
    void force_split(std::vector<std::uint32_t> choice) { forced_split_ = std::move(choice); }

    std::vector<std::vector<std::vector<std::uint32_t>>> solutions; // per solution, per edge
    std::vector<std::vector<std::uint32_t>> split_choices;
    bool budget_hit = false;
    std::uint64_t nodes = 0;

private:
    Partition knowledge(const std::vector<int>& msgs, const std::vector<std::size_t>& atoms,
                        std::optional<std::size_t> skip = std::nullopt) const
    {
        Partition part(plan_.space.count());
        for (int m : msgs)
            part.refine(plan_.message_values[m], plan_.message_sizes[m]);
        for (auto a : atoms)
            if (a != skip)
                part.refine(values_[a], plan_.edges[a].size);
        return part;
    }

    bool full_check(std::size_t di) const
    {
        const PlanDemand& d = plan_.demands[di];
        const PlanNode& n = plan_.nodes[d.node];
        Partition part = knowledge(n.atom_messages, n.atom_edges);
        std::vector<std::uint32_t> seen(part.count(), UINT32_MAX);
        const auto& cls = part.classes();
        for (std::size_t t = 0; t < cls.size(); ++t) {
            auto& s = seen[cls[t]];
            if (s == UINT32_MAX)
                s = d.wanted[t];
            else if (s != d.wanted[t])
                return false;
        }
        return true;
    }

    bool tick()
    {
        ++nodes;
        std::uint64_t total = shared_ ? shared_->fetch_add(1) + 1 : nodes;
        if (budget_ && total > *budget_) {
            budget_hit = true;
            return false;
        }
        return true;
    }

    bool complete_edge(std::size_t p)
    {
        for (auto d : plan_.edges[p].demands_last)
            if (!full_check(d))
                return false;
        return true;
    }

    bool dfs(std::size_t p)
    {
        if (p == plan_.edges.size()) {
            solutions.push_back(values_);
            return solutions.size() >= limit_;
        }
        const PlanEdge& pe = plan_.edges[p];
        const PlanNode& tail = plan_.nodes[pe.tail];
        const std::uint64_t T = plan_.space.count();

        if (pe.kind == EdgeKind::Pinned) {
            values_[p].assign(T, 0);
            Row in(pe.raw_messages.size() + pe.raw_inputs.size());
            for (std::uint64_t t = 0; t < T; ++t) {
                std::size_t i = 0;
                for (int m : pe.raw_messages)
                    in[i++] = plan_.message_values[m][t];
                for (auto q : pe.raw_inputs)
                    in[i++] = values_[q][t];
                values_[p][t] = pe.pin->at(in);
            }
            return complete_edge(p) && dfs(p + 1);
        }

        Partition part = knowledge(tail.atom_messages, tail.atom_edges);
        if (pe.kind == EdgeKind::Forward || (pe.canonical && part.count() <= pe.size)) {
            values_[p] = part.classes();
            return complete_edge(p) && dfs(p + 1);
        }
        return fill(p, part);
    }

    struct Checker {
        std::size_t demand;
        std::vector<std::uint32_t> base;
        std::vector<std::uint32_t> slot; // base*size+value -> wanted id + 1
        std::vector<std::uint32_t> refs;
    };

    bool fill(std::size_t p, const Partition& part)
    {
        const PlanEdge& pe = plan_.edges[p];
        const std::uint64_t C = part.count();
        const auto& cls = part.classes();
        std::vector<std::vector<std::uint32_t>> members(C);
        for (std::size_t t = 0; t < cls.size(); ++t)
            members[cls[t]].push_back(static_cast<std::uint32_t>(t));

        std::vector<Checker> checkers;
        for (auto di : pe.demands_last) {
            const PlanNode& n = plan_.nodes[plan_.demands[di].node];
            Partition base = knowledge(n.atom_messages, n.atom_edges, p);
            const std::uint64_t span = base.count() * pe.size;
            if (span > (std::uint64_t{1} << 26))
                throw std::length_error("solver: decoding check table too large");
            checkers.push_back({di, base.classes(), std::vector<std::uint32_t>(span, 0),
                                std::vector<std::uint32_t>(span, 0)});
        }

        auto& vals = values_[p];
        vals.assign(cls.size(), 0);
        std::vector<std::pair<std::uint32_t, std::uint64_t>> log; // (checker, slot)
        std::vector<std::size_t> log_start(C, 0);

        auto undo = [&](std::size_t j) {
            while (log.size() > log_start[j]) {
                auto [c, s] = log.back();
                log.pop_back();
                if (--checkers[c].refs[s] == 0)
                    checkers[c].slot[s] = 0;
            }
        };
        auto apply = [&](std::size_t j, std::uint32_t x) {
            log_start[j] = log.size();
            for (auto t : members[j]) {
                vals[t] = x;
                for (std::uint32_t c = 0; c < checkers.size(); ++c) {
                    Checker& ch = checkers[c];
                    std::uint64_t s = std::uint64_t{ch.base[t]} * pe.size + x;
                    std::uint32_t want = plan_.demands[ch.demand].wanted[t] + 1;
                    if (ch.slot[s] == 0)
                        ch.slot[s] = want;
                    else if (ch.slot[s] != want) {
                        undo(j);
                        return false;
                    }
                    ++ch.refs[s];
                    log.emplace_back(c, s);
                }
            }
            return true;
        };

        const bool splitting = !split_seen_ && (collect_split_ || forced_split_);
        if (splitting)
            split_seen_ = true;
        if (splitting && forced_split_) {
            const auto& forced = *forced_split_;
            for (std::size_t j = 0; j < C; ++j)
                if (!apply(j, forced[j]))
                    return false;
            return dfs(p + 1);
        }

        std::vector<std::int64_t> choice(C, -1);
        std::vector<std::int64_t> max_used(C + 1, -1);
        std::int64_t j = 0;
        while (j >= 0) {
            if (choice[j] >= 0)
                undo(static_cast<std::size_t>(j));
            const std::uint64_t lim =
                pe.canonical ? std::min<std::uint64_t>(pe.size, static_cast<std::uint64_t>(max_used[j] + 2)) : pe.size;
            std::int64_t x = choice[j] + 1;
            bool placed = false;
            for (; static_cast<std::uint64_t>(x) < lim; ++x) {
                if (!tick())
                    return true;
                if (apply(static_cast<std::size_t>(j), static_cast<std::uint32_t>(x))) {
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                choice[j] = -1;
                --j;
                continue;
            }
            choice[j] = x;
            if (static_cast<std::uint64_t>(j) + 1 == C) {
                if (splitting) {
                    std::vector<std::uint32_t> per_class(C);
                    for (std::size_t c = 0; c < C; ++c)
                        per_class[c] = static_cast<std::uint32_t>(choice[c]);
                    split_choices.push_back(std::move(per_class));
                } else if (dfs(static_cast<std::size_t>(p) + 1)) {
                    return true;
                }
                continue;
            }
            max_used[j + 1] = std::max(max_used[j], x);
            ++j;
            choice[j] = -1;
        }
        return false;
    }

    const Plan& plan_;
    std::optional<std::uint64_t> budget_;
    std::size_t limit_;
    std::vector<std::vector<std::uint32_t>> values_;
    std::atomic<std::uint64_t>* shared_ = nullptr;
    bool collect_split_ = false;
    bool split_seen_ = false;
    std::optional<std::vector<std::uint32_t>> forced_split_;
};

inline CodingScheme build_scheme(const Plan& plan, const std::vector<std::vector<std::uint32_t>>& values)
{
    const Network& net = *plan.net;
    CodingScheme s;
    s.k = plan.k;
    const std::uint64_t T = plan.space.count();
    std::map<std::string, std::size_t> pos;
    for (std::size_t p = 0; p < plan.edges.size(); ++p)
        pos[plan.edges[p].edge->id] = p;

    auto raw_input = [&](const std::string& node, std::uint64_t t) {
        Row in;
        for (int m : net.sources_of(node))
            in.push_back(plan.message_values[m - 1][t]);
        for (const Edge* e : net.in_edges(node))
            in.push_back(values[pos.at(e->id)][t]);
        return in;
    };
    std::map<std::string, std::vector<Row>> inputs;
    for (const auto& n : net.nodes) {
        auto& rows = inputs[n.id];
        rows.reserve(T);
        for (std::uint64_t t = 0; t < T; ++t)
            rows.push_back(raw_input(n.id, t));
    }
    for (std::size_t p = 0; p < plan.edges.size(); ++p) {
        const Edge& e = *plan.edges[p].edge;
        Table tab;
        tab.radices = input_radices(net, e.tail, plan.k);
        tab.codomain = plan.edges[p].size;
        for (std::uint64_t t = 0; t < T; ++t)
            tab.entries[inputs[e.tail][t]] = values[p][t];
        s.encodings[e.id] = std::move(tab);
    }
    for (const auto& n : net.nodes) {
        const auto& b = net.demands_of(n.id);
        if (b.empty())
            continue;
        DecodeTable dec;
        dec.radices = input_radices(net, n.id, plan.k);
        dec.outputs.assign(b.begin(), b.end());
        for (std::uint64_t t = 0; t < T; ++t) {
            Row want;
            for (int m : b)
                want.push_back(plan.message_values[m - 1][t]);
            dec.entries[inputs[n.id][t]] = want;
        }
        s.decodings[n.id] = std::move(dec);
    }
    return s;
}

struct RawResult {
    std::vector<std::vector<std::vector<std::uint32_t>>> solutions;
    bool budget_hit = false;
    std::uint64_t nodes = 0;
};

inline RawResult run_search(const Plan& plan, const SolveOptions& opts, std::size_t limit)
{
    RawResult out;
    if (opts.workers <= 1) {
        Search s(plan, opts.node_budget, limit);
        s.run();
        out.solutions = std::move(s.solutions);
        out.budget_hit = s.budget_hit;
        out.nodes = s.nodes;
        return out;
    }

    // Split on the first branching edge: every admissible table for it roots
    // an independent subtree. Results are merged in subtree order, so the
    // outcome equals the single-worker search.
    std::atomic<std::uint64_t> counter{0};
    Search probe(plan, opts.node_budget, limit);
    probe.set_shared_counter(&counter);
    probe.collect_split_choices();
    bool stopped = probe.run();
    if (probe.split_choices.empty() || stopped) {
        out.solutions = std::move(probe.solutions);
        out.budget_hit = probe.budget_hit;
        out.nodes = counter.load();
        return out;
    }
    const auto& roots = probe.split_choices;
    std::vector<RawResult> parts(roots.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{SIZE_MAX}; // lowest subtree index that reached the limit
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= roots.size() || i > best.load())
                return;
            Search s(plan, opts.node_budget, limit);
            s.set_shared_counter(&counter);
            s.force_split(roots[i]);
            s.run();
            parts[i].solutions = std::move(s.solutions);
            parts[i].budget_hit = s.budget_hit;
            if (parts[i].solutions.size() >= limit) {
                std::size_t cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < opts.workers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    for (std::size_t i = 0; i < parts.size() && out.solutions.size() < limit; ++i) {
        if (parts[i].budget_hit)
            out.budget_hit = true;
        for (auto& sol : parts[i].solutions) {
            if (out.solutions.size() >= limit)
                break;
            out.solutions.push_back(std::move(sol));
        }
        if (out.budget_hit)
            break;
    }
    out.nodes = counter.load();
    return out;
}

inline void require_solvable_input(const Network& net, std::uint64_t k)
{
    if (k == 0)
        throw std::invalid_argument("k must be >= 1");
    if (auto r = validate(net); !r.ok())
        throw std::invalid_argument("invalid network: " + r.violations.front().rule + " " + r.violations.front().element);
}

} // namespace detail

/// Decides solvability at one k. The search assigns encoding tables edge by
/// edge in topological order, one knowledge class at a time, and prunes as
/// soon as a demand node can no longer separate its demanded messages.
/// Decoding tables are derived, never searched.
inline SolveOutcome solve_at_k(const Network& net, std::uint64_t k, const SolveOptions& opts = {})
{
    detail::require_solvable_input(net, k);
    auto plan = detail::make_plan(net, k, opts);
    auto raw = detail::run_search(plan, opts, 1);
    SolveOutcome out;
    out.nodes = raw.nodes;
    if (!raw.solutions.empty()) {
        out.status = SolveStatus::Solvable;
        out.scheme = detail::build_scheme(plan, raw.solutions.front());
        if (auto r = verify_scheme(net, *out.scheme); !r.ok())
            throw std::logic_error("solver produced an invalid witness: " + r.violations.front().rule + " " +
                                   r.violations.front().element);
    } else {
        out.status = raw.budget_hit ? SolveStatus::BudgetExhausted : SolveStatus::UnsolvableAtK;
    }
    return out;
}

struct EnumerationResult {
    std::vector<CodingScheme> schemes;
    bool budget_hit = false;
};

/// Up to `limit` distinct schemes in search order. Without symmetry
/// breaking every scheme (up to unreachable table entries) is returned.
inline EnumerationResult enumerate_solutions(const Network& net, std::uint64_t k,
                                             std::size_t limit = std::numeric_limits<std::size_t>::max(),
                                             const SolveOptions& opts = {})
{
    detail::require_solvable_input(net, k);
    if (limit == 0)
        throw std::invalid_argument("limit must be positive");
    auto plan = detail::make_plan(net, k, opts);
    auto raw = detail::run_search(plan, opts, limit);
    EnumerationResult out;
    out.budget_hit = raw.budget_hit;
    for (const auto& sol : raw.solutions) {
        out.schemes.push_back(detail::build_scheme(plan, sol));
        if (auto r = verify_scheme(net, out.schemes.back()); !r.ok())
            throw std::logic_error("solver produced an invalid witness");
    }
    return out;
}

struct SweepResult {
    std::optional<CodingScheme> found; // least k with a witness
    std::vector<std::pair<std::uint64_t, SolveStatus>> per_k;
    bool k_independent = false; // every size fixed: k=1 settles all k

    bool exhausted() const
    {
        return std::any_of(per_k.begin(), per_k.end(),
                           [](const auto& p) { return p.second == SolveStatus::BudgetExhausted; });
    }
};

/// Tries k = 1..k_max and stops at the first solvable k. An empty result is
/// only "nothing up to k_max": solvability over all k is undecidable in
/// general. If no edge depends on k, k=1 is optimal and settles every k.
inline SweepResult solve_up_to(const Network& net, std::uint64_t k_max, const SolveOptions& opts = {})
{
    if (k_max == 0)
        throw std::invalid_argument("k_max must be >= 1");
    bool default_messages = std::any_of(net.messages.begin(), net.messages.end(),
                                        [](const SizeSpec& s) { return s.is_default(); });
    bool k_edges = std::any_of(net.edges.begin(), net.edges.end(), [&](const Edge& e) {
        return e.unlimited ? default_messages : e.size.is_default();
    });
    SweepResult out;
    out.k_independent = !k_edges;
    const std::uint64_t last = out.k_independent ? 1 : k_max;
    for (std::uint64_t k = 1; k <= last; ++k) {
        auto r = solve_at_k(net, k, opts);
        out.per_k.emplace_back(k, r.status);
        if (r.solvable()) {
            out.found = std::move(r.scheme);
            break;
        }
    }
    return out;
}

} // namespace pfnc

#endif // PFNC_SOLVER_HPP
