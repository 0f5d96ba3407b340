#ifndef PFNC_GADGETS_HPP
#define PFNC_GADGETS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "entropy.hpp"
#include "network.hpp"
#include "network_io.hpp"
#include "solver.hpp"

namespace pfnc {

enum class PortKind { MessageIn, SignalIn, SignalOut, ConditionIn };

inline const char* to_string(PortKind k)
{
    switch (k) {
    case PortKind::MessageIn: return "message_in";
    case PortKind::SignalIn: return "signal_in";
    case PortKind::SignalOut: return "signal_out";
    case PortKind::ConditionIn: return "condition_in";
    }
    return "?";
}

/// A gadget port. MessageIn ports are fragment messages of the same name;
/// the other kinds attach to the broadcast junction node of the same name.
struct Port {
    std::string name;
    PortKind kind = PortKind::SignalIn;
    SizeSpec size;
};

/// A hidden signal the condition quantifies over: some function of `inputs`
/// with at most `size` values.
struct Existential {
    std::string name;
    SizeSpec size;
    std::vector<std::string> inputs;
};

/// "For every value of `slice_by`, there are existentials satisfying every
/// condition and every size bound on that slice."
struct DeclaredCondition {
    std::vector<Existential> existentials;
    std::vector<InfoCondition> conditions;
    std::vector<std::pair<std::vector<std::string>, SizeSpec>> size_bounds;
    std::vector<std::string> slice_by;
};

struct Gadget {
    std::string name;
    Network fragment; // junctions of input ports have no in-edge until bound
    std::vector<Port> ports;
    DeclaredCondition condition;

    const Port* port(const std::string& n) const
    {
        for (const auto& p : ports)
            if (p.name == n)
                return &p;
        return nullptr;
    }
    bool is_checker() const
    {
        return std::none_of(ports.begin(), ports.end(), [](const Port& p) { return p.kind == PortKind::SignalOut; });
    }
};

/// Error raised for incompatible or missing port bindings.
class BindingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline InfoCondition rename_condition(const InfoCondition& c,
                                      const std::function<std::vector<std::string>(const std::string&)>& f)
{
    auto map = [&](const std::vector<std::string>& names) {
        std::vector<std::string> out;
        for (const auto& n : names)
            for (auto& m : f(n))
                if (std::find(out.begin(), out.end(), m) == out.end())
                    out.push_back(std::move(m));
        return out;
    };
    return std::visit(
        [&](const auto& x) -> InfoCondition {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, cond::Determined>)
                return cond::Determined{map(x.target), map(x.given)};
            else if constexpr (std::is_same_v<T, cond::Independent>)
                return cond::Independent{map(x.a), map(x.b)};
            else if constexpr (std::is_same_v<T, cond::Uniform>)
                return cond::Uniform{map(x.vars)};
            else
                return cond::SupportAtMost{map(x.vars), x.bound};
        },
        c);
}

} // namespace detail

/// Incrementally builds a network fragment out of messages, junctions,
/// producer nodes, demand nodes and embedded gadgets. Gadget constructors use
/// it with condition tracking on; compose() and the acceptance harness use
/// it with tracking off.
class FragmentBuilder {
public:
    explicit FragmentBuilder(bool track_conditions = true) : track_(track_conditions) {}

    Network net;
    DeclaredCondition condition;
    std::vector<Port> ports;

    bool is_message(const std::string& n) const { return message_.count(n) > 0; }
    bool is_junction(const std::string& n) const
    {
        const Node* node = net.find_node(n);
        return node && node->broadcast;
    }

    int message(const std::string& name, SizeSpec size)
    {
        if (message_.count(name))
            throw BindingError("duplicate message " + name);
        net.messages.push_back(size);
        net.message_names.push_back(name);
        message_[name] = net.message_count();
        return net.message_count();
    }

    void node(const std::string& id, bool broadcast = false)
    {
        if (net.find_node(id))
            throw BindingError("duplicate node " + id);
        net.nodes.push_back({id, broadcast});
    }
    void junction(const std::string& id) { node(id, true); }

    std::string edge(const std::string& tail, const std::string& head, SizeSpec size, bool unlimited = false,
                     std::string id = {})
    {
        if (id.empty())
            id = tail + "->" + head;
        std::string base = id;
        for (int i = 2; edge_ids_.count(id); ++i)
            id = base + "#" + std::to_string(i);
        edge_ids_.insert(id);
        net.edges.push_back({id, tail, head, unlimited ? SizeSpec::default_size() : size, unlimited});
        return id;
    }
    std::string link(const std::string& tail, const std::string& head)
    {
        return edge(tail, head, SizeSpec::default_size(), true);
    }

    /// Gives `node` access to each input: messages join its source set,
    /// junctions are wired in by unlimited edges.
    void feed(const std::string& node, const std::vector<std::string>& inputs)
    {
        for (const auto& in : inputs) {
            if (is_message(in))
                net.sources[node].insert(message_.at(in));
            else if (net.find_node(in))
                link(in, node);
            else
                throw BindingError("unknown input " + in + " for node " + node);
        }
    }

    /// A node computing a `size`-valued signal from `inputs` into a new
    /// junction `out`.
    void produce(const std::string& id, const std::vector<std::string>& inputs, SizeSpec size, const std::string& out)
    {
        node(id);
        feed(id, inputs);
        junction(out);
        edge(id, out, size);
    }

    /// A node that must decode `wanted` from `inputs`.
    void check(const std::string& id, const std::vector<std::string>& inputs, const std::vector<std::string>& wanted)
    {
        node(id);
        feed(id, inputs);
        for (const auto& w : wanted) {
            if (!is_message(w))
                throw BindingError("demand " + w + " is not a message");
            net.demands[id].insert(message_.at(w));
        }
        if (track_)
            condition.conditions.push_back(cond::Determined{wanted, inputs});
    }

    // Port declarations (gadget construction).
    void message_port(const std::string& name, SizeSpec size)
    {
        message(name, size);
        ports.push_back({name, PortKind::MessageIn, size});
    }
    void signal_in(const std::string& name, SizeSpec size)
    {
        junction(name);
        ports.push_back({name, PortKind::SignalIn, size});
    }
    void condition_in(const std::string& name, SizeSpec size)
    {
        junction(name);
        ports.push_back({name, PortKind::ConditionIn, size});
        condition.slice_by.push_back(name);
    }
    /// An internal signal chosen by the network: a producer node plus, in the
    /// declared condition, an existential of the same name.
    void hidden(const std::string& name, const std::vector<std::string>& inputs, SizeSpec size)
    {
        produce(name + ":enc", inputs, size, name);
        if (track_)
            condition.existentials.push_back({name, size, inputs});
    }
    void signal_out(const std::string& name, const std::vector<std::string>& inputs, SizeSpec size)
    {
        hidden(name, inputs, size);
        ports.push_back({name, PortKind::SignalOut, size});
    }

    /// Copies gadget `g` in under `prefix`. `bind` maps each input port to
    /// the builder names (messages and junctions) it reads. Returns the
    /// junction ids of g's output ports. `check_sizes` off lets a message
    /// port read a larger alphabet, as a conditioned buffer does on each slice.
    std::map<std::string, std::string> embed(const Gadget& g, const std::string& prefix,
                                             const std::map<std::string, std::vector<std::string>>& bind,
                                             bool check_sizes = true)
    {
        for (const auto& [p, names] : bind)
            if (!g.port(p) || g.port(p)->kind == PortKind::SignalOut)
                throw BindingError(g.name + ": no input port named " + p);

        auto pre = [&](const std::string& id) { return prefix.empty() ? id : prefix + "/" + id; };
        std::map<std::string, std::string> node_map;       // fragment node -> builder node
        std::map<std::string, std::vector<std::string>> var_map; // condition variable renames
        std::map<std::string, std::vector<int>> msg_map;    // fragment message name -> builder indices
        std::map<std::string, std::string> outputs;

        for (const auto& port : g.ports) {
            auto it = bind.find(port.name);
            const bool bound = it != bind.end() && !it->second.empty();
            for (const auto& n : bound ? it->second : std::vector<std::string>{})
                if (!is_message(n) && !is_junction(n))
                    throw BindingError(g.name + "." + port.name + ": unknown binding target " + n);
            switch (port.kind) {
            case PortKind::MessageIn: {
                if (!bound)
                    throw BindingError(g.name + "." + port.name + ": unbound MessageIn port");
                for (const auto& n : it->second)
                    if (!is_message(n))
                        throw BindingError(g.name + "." + port.name + ": must be bound to messages, got signal " + n);
                if (check_sizes && it->second.size() == 1 && port.size.is_fixed()) {
                    const auto& ms = net.messages[message_.at(it->second[0]) - 1];
                    if (ms.is_fixed() && ms.value() != port.size.value())
                        throw BindingError(g.name + "." + port.name + ": size mismatch");
                }
                for (const auto& n : it->second)
                    msg_map[port.name].push_back(message_.at(n));
                var_map[port.name] = it->second;
                break;
            }
            case PortKind::SignalIn:
            case PortKind::ConditionIn: {
                if (!bound && port.kind == PortKind::SignalIn)
                    throw BindingError(g.name + "." + port.name + ": unbound SignalIn port");
                if (bound && it->second.size() == 1 && is_junction(it->second[0])) {
                    const std::string& j = it->second[0];
                    for (const Edge* e : net.in_edges(j))
                        if (!e->unlimited && port.size.is_fixed() && e->size.is_fixed() &&
                            e->size.value() != port.size.value())
                            throw BindingError(g.name + "." + port.name + ": size mismatch with " + j);
                    node_map[port.name] = j;
                    var_map[port.name] = {j};
                } else {
                    node_map[port.name] = pre(port.name);
                    var_map[port.name] = bound ? it->second : std::vector<std::string>{};
                }
                break;
            }
            case PortKind::SignalOut:
                node_map[port.name] = pre(port.name);
                outputs[port.name] = pre(port.name);
                break;
            }
        }

        for (const auto& n : g.fragment.nodes) {
            if (!node_map.count(n.id))
                node_map[n.id] = pre(n.id);
            const std::string& id = node_map[n.id];
            if (!net.find_node(id))
                node(id, n.broadcast);
        }
        for (const auto& e : g.fragment.edges)
            edge(node_map.at(e.tail), node_map.at(e.head), e.size, e.unlimited, pre(e.id));

        auto builder_messages = [&](const MessageSet& set) {
            std::set<int> out;
            for (int i : set)
                for (int j : msg_map.at(g.fragment.message_name(i)))
                    out.insert(j);
            return out;
        };
        for (const auto& [n, set] : g.fragment.sources)
            for (int j : builder_messages(set))
                net.sources[node_map.at(n)].insert(j);
        for (const auto& [n, set] : g.fragment.demands)
            for (int j : builder_messages(set))
                net.demands[node_map.at(n)].insert(j);

        // Input junctions that were not merged still need a driver.
        for (const auto& port : g.ports) {
            if (port.kind != PortKind::SignalIn && port.kind != PortKind::ConditionIn)
                continue;
            const std::string& j = node_map.at(port.name);
            if (j != pre(port.name))
                continue;
            auto it = bind.find(port.name);
            if (it == bind.end() || it->second.empty()) {
                std::string c = pre(port.name) + ":const";
                node(c);
                edge(c, j, SizeSpec::fixed(1));
            } else {
                std::string s = pre(port.name) + ":in";
                node(s);
                feed(s, it->second);
                link(s, j);
            }
        }

        if (track_) {
            if (!g.condition.slice_by.empty())
                throw BindingError("a conditional gadget cannot be embedded inside another gadget");
            auto rename = [&](const std::string& v) -> std::vector<std::string> {
                if (auto it = var_map.find(v); it != var_map.end())
                    return it->second;
                return {pre(v)};
            };
            auto rename_all = [&](const std::vector<std::string>& vs) {
                std::vector<std::string> out;
                for (const auto& v : vs)
                    for (auto& r : rename(v))
                        out.push_back(std::move(r));
                return out;
            };
            for (const auto& ex : g.condition.existentials)
                condition.existentials.push_back({pre(ex.name), ex.size, rename_all(ex.inputs)});
            for (const auto& c : g.condition.conditions)
                condition.conditions.push_back(detail::rename_condition(c, rename));
            for (const auto& [vars, bound] : g.condition.size_bounds)
                condition.size_bounds.push_back({rename_all(vars), bound});
        }
        return outputs;
    }

    Gadget finish(const std::string& name) const { return Gadget{name, net, ports, condition}; }

private:
    bool track_;
    std::map<std::string, int> message_;
    std::set<std::string> edge_ids_;
};

// ---------------------------------------------------------------------------
// Constructors

/// H(M1|Y,M2) = H(M2|Y,M1) = 0: Y is M1 xor M2 up to relabelling.
inline Gadget xor_checker()
{
    FragmentBuilder b;
    b.message_port("M1", SizeSpec::fixed(2));
    b.message_port("M2", SizeSpec::fixed(2));
    b.signal_in("Y", SizeSpec::fixed(2));
    b.check("d1", {"Y", "M2"}, {"M1"});
    b.check("d2", {"Y", "M1"}, {"M2"});
    return b.finish("xor_checker");
}

/// The butterfly: a binary function of M1,M2 that the embedded checker
/// forces to be the parity.
inline Gadget xor_gate()
{
    FragmentBuilder b;
    b.message_port("M1", SizeSpec::fixed(2));
    b.message_port("M2", SizeSpec::fixed(2));
    b.signal_out("Y", {"M1", "M2"}, SizeSpec::fixed(2));
    b.embed(xor_checker(), "chk", {{"M1", {"M1"}}, {"M2", {"M2"}}, {"Y", {"Y"}}});
    return b.finish("xor_gate");
}

/// Adds a condition input `name` wired to every non-broadcast node; the
/// result checks the original condition on every slice W = w.
inline Gadget conditionalize(const Gadget& g, std::uint32_t w_alphabet, const std::string& name = "W")
{
    if (w_alphabet == 0)
        throw std::invalid_argument("conditionalize: w_alphabet must be >= 1");
    if (g.port(name) || g.fragment.find_node(name))
        throw BindingError("conditionalize: port name " + name + " collides with " + g.name);
    Gadget out = g;
    out.name = "cond_" + g.name;
    std::set<std::string> taken;
    for (const auto& e : out.fragment.edges)
        taken.insert(e.id);
    std::vector<std::string> targets;
    for (const auto& n : out.fragment.nodes)
        if (!n.broadcast)
            targets.push_back(n.id);
    out.fragment.nodes.push_back({name, true});
    for (const auto& t : targets) {
        std::string id = name + "->" + t;
        for (int i = 2; taken.count(id); ++i)
            id = name + "->" + t + "#" + std::to_string(i);
        taken.insert(id);
        out.fragment.edges.push_back({id, name, t, SizeSpec::default_size(), true});
    }
    out.ports.push_back({name, PortKind::ConditionIn, SizeSpec::fixed(w_alphabet)});
    out.condition.slice_by.push_back(name);
    return out;
}

/// (b+1)-state buffer: X binary, Y in [b], Z in [b+1]; Z_2..Z_b are hidden
/// companions of Z = Z_1.
inline Gadget bstate_checker(int b)
{
    if (b < 2)
        throw std::invalid_argument("bstate_checker: b must be >= 2");
    const auto zs = SizeSpec::fixed(static_cast<std::uint32_t>(b + 1));
    FragmentBuilder fb;
    fb.message_port("X", SizeSpec::fixed(2));
    fb.message_port("Y", SizeSpec::fixed(static_cast<std::uint32_t>(b)));
    fb.signal_in("Z", zs);
    std::vector<std::string> all = {"Z"};
    for (int i = 2; i <= b; ++i) {
        std::string zi = "Z" + std::to_string(i);
        fb.hidden(zi, {"X", "Y"}, zs);
        all.push_back(zi);
    }
    for (const auto& z : all)
        fb.check("y|" + z, {z}, {"Y"});
    fb.check("x|Z*", all, {"X"});
    return fb.finish("bstate_checker_" + std::to_string(b));
}

/// Z = 2 when Y = 0 and Z = X when Y = 1, up to relabelling.
inline Gadget tristate_checker()
{
    FragmentBuilder b;
    b.message_port("X", SizeSpec::fixed(2));
    b.message_port("Y", SizeSpec::fixed(2));
    b.signal_in("Z", SizeSpec::fixed(3));
    b.hidden("Zt", {"X", "Y"}, SizeSpec::fixed(3));
    b.check("y|Z", {"Z"}, {"Y"});
    b.check("y|Zt", {"Zt"}, {"Y"});
    b.check("x|Z,Zt", {"Z", "Zt"}, {"X"});
    return b.finish("tristate_checker");
}

inline Gadget tristate_gate()
{
    FragmentBuilder b;
    b.message_port("X", SizeSpec::fixed(2));
    b.message_port("Y", SizeSpec::fixed(2));
    b.signal_out("Z", {"X", "Y"}, SizeSpec::fixed(3));
    b.embed(tristate_checker(), "chk", {{"X", {"X"}}, {"Y", {"Y"}}, {"Z", {"Z"}}});
    return b.finish("tristate_gate");
}

/// Both outputs together, and each output with M0 xor M1, recover (M0,M1).
inline Gadget switch_checker()
{
    FragmentBuilder b;
    b.message_port("M0", SizeSpec::fixed(2));
    b.message_port("M1", SizeSpec::fixed(2));
    b.signal_in("Z0", SizeSpec::fixed(2));
    b.signal_in("Z1", SizeSpec::fixed(2));
    auto x = b.embed(xor_gate(), "P", {{"M1", {"M0"}}, {"M2", {"M1"}}});
    const std::string p = x.at("Y");
    b.check("m|Z0,Z1", {"Z0", "Z1"}, {"M0", "M1"});
    b.check("m|Z0,P", {"Z0", p}, {"M0", "M1"});
    b.check("m|Z1,P", {"Z1", p}, {"M0", "M1"});
    return b.finish("switch_checker");
}

inline Gadget switch_gate()
{
    FragmentBuilder b;
    b.message_port("M0", SizeSpec::fixed(2));
    b.message_port("M1", SizeSpec::fixed(2));
    b.signal_out("Z0", {"M0", "M1"}, SizeSpec::fixed(2));
    b.signal_out("Z1", {"M0", "M1"}, SizeSpec::fixed(2));
    b.embed(switch_checker(), "chk", {{"M0", {"M0"}}, {"M1", {"M1"}}, {"Z0", {"Z0"}}, {"Z1", {"Z1"}}});
    return b.finish("switch_gate");
}

inline Gadget cond_switch_gate(std::uint32_t w_alphabet) { return conditionalize(switch_gate(), w_alphabet); }

inline std::string set_port(int i, int bit) { return "Z" + std::to_string(i) + "_" + std::to_string(bit); }

/// States of n switches sharing (M0,M1) restricted to `theta` (bit strings,
/// character i is the state of switch i+1). One demand per excluded pattern.
inline Gadget set_checker(int n, const std::set<std::string>& theta)
{
    if (n < 1)
        throw std::invalid_argument("set_checker: n must be >= 1");
    if (theta.empty())
        throw std::invalid_argument("set_checker: empty state set would make every network unsolvable");
    for (const auto& s : theta)
        if (s.size() != static_cast<std::size_t>(n) || s.find_first_not_of("01") != std::string::npos)
            throw std::invalid_argument("set_checker: state '" + s + "' is not an " + std::to_string(n) + "-bit string");
    if (n > 20)
        throw std::invalid_argument("set_checker: n too large");
    FragmentBuilder b;
    b.message_port("M1", SizeSpec::fixed(2));
    for (int i = 1; i <= n; ++i)
        for (int bit = 0; bit < 2; ++bit)
            b.signal_in(set_port(i, bit), SizeSpec::fixed(2));
    for (std::uint32_t a = 0; a < (1u << n); ++a) {
        std::string bits;
        for (int i = 0; i < n; ++i)
            bits += ((a >> (n - 1 - i)) & 1u) ? '1' : '0';
        if (theta.count(bits))
            continue;
        std::vector<std::string> in;
        for (int i = 0; i < n; ++i)
            in.push_back(set_port(i + 1, bits[static_cast<std::size_t>(i)] - '0'));
        b.check("not " + bits, in, {"M1"});
    }
    return b.finish("set_checker");
}

inline Gadget cond_set_checker(int n, const std::set<std::string>& theta, std::uint32_t w_alphabet)
{
    return conditionalize(set_checker(n, theta), w_alphabet);
}

/// theta_1 = ... = theta_b for a conditional switch read through Z0 and its
/// select signal W.
inline Gadget virtual_equality_checker(std::uint32_t b)
{
    if (b < 1)
        throw std::invalid_argument("virtual_equality_checker: b must be >= 1");
    FragmentBuilder fb;
    fb.message_port("M0", SizeSpec::fixed(2));
    fb.message_port("M1", SizeSpec::fixed(2));
    fb.signal_in("Z0", SizeSpec::fixed(2));
    fb.signal_in("W", SizeSpec::fixed(b));
    fb.hidden("G", {"Z0", "W"}, SizeSpec::fixed(2));
    auto x = fb.embed(xor_gate(), "P", {{"M1", {"M0"}}, {"M2", {"M1"}}});
    fb.check("m|G,P", {"G", x.at("Y")}, {"M0", "M1"});
    return fb.finish("virtual_equality_checker");
}

/// Conditioned on W1 with select W = (W1, W2): equality within every W1 slice.
inline Gadget cond_virtual_equality_checker(std::uint32_t b1, std::uint32_t b2)
{
    auto g = conditionalize(virtual_equality_checker(b1 * b2), b1, "W1");
    g.name = "cond_virtual_equality_checker";
    return g;
}

/// (theta_1..theta_b) != 0. The select W must be a message (or a tuple of
/// messages) because it feeds the buffer's Y input.
inline Gadget virtual_or_checker(std::uint32_t b, std::uint32_t select_size = 0)
{
    if (b < 2)
        throw std::invalid_argument("virtual_or_checker: b must be >= 2");
    FragmentBuilder fb;
    fb.message_port("M1", SizeSpec::fixed(2));
    fb.signal_in("Z0", SizeSpec::fixed(2));
    fb.message_port("W", SizeSpec::fixed(select_size ? select_size : b));
    fb.hidden("G", {"Z0", "W"}, SizeSpec::fixed(b + 1));
    fb.embed(bstate_checker(static_cast<int>(b)), "B", {{"X", {"M1"}}, {"Y", {"W"}}, {"Z", {"G"}}}, false);
    return fb.finish("virtual_or_checker_" + std::to_string(b));
}

/// Conditioned on W1 with W = (W1, W2); uses the (b2+1)-state buffer.
inline Gadget cond_virtual_or_checker(std::uint32_t b1, std::uint32_t b2)
{
    auto g = conditionalize(virtual_or_checker(b2, b1 * b2), b1, "W1");
    g.name = "cond_virtual_or_checker";
    return g;
}

/// X2 is pi_U(X1) for two pointwise-distinct permutations, with |X2| <= k.
inline Gadget cycles_checker()
{
    FragmentBuilder b;
    b.message_port("X1", SizeSpec::default_size());
    b.message_port("U", SizeSpec::fixed(2));
    b.signal_in("X2", SizeSpec::default_size());
    b.check("u|X1,X2", {"X1", "X2"}, {"U"});
    b.check("x1|X2,U", {"X2", "U"}, {"X1"});
    b.condition.size_bounds.push_back({{"X2"}, SizeSpec::default_size()});
    return b.finish("cycles_checker");
}

inline Gadget cycles_gate()
{
    FragmentBuilder b;
    b.message_port("X1", SizeSpec::default_size());
    b.message_port("U", SizeSpec::fixed(2));
    b.signal_out("X2", {"X1", "U"}, SizeSpec::default_size());
    b.embed(cycles_checker(), "chk", {{"X1", {"X1"}}, {"U", {"U"}}, {"X2", {"X2"}}});
    return b.finish("cycles_gate");
}

struct GadgetParams {
    int b = 2;
    int b1 = 2;
    int n = 3;
    std::set<std::string> theta;
    std::uint32_t w = 2;
};

inline std::vector<std::string> gadget_names()
{
    return {"xor_checker",      "xor_gate",         "tristate_checker",
            "tristate_gate",    "bstate_checker",   "switch_checker",
            "switch_gate",      "cond_switch_gate", "set_checker",
            "cond_set_checker", "virtual_equality_checker", "cond_virtual_equality_checker",
            "virtual_or_checker", "cond_virtual_or_checker", "cycles_checker",
            "cycles_gate",      "cond_xor_checker"};
}

/// Catalog lookup by name ("xor" is accepted for xor_checker).
inline Gadget make_gadget(const std::string& name, const GadgetParams& p = {})
{
    auto ub = static_cast<std::uint32_t>(p.b);
    auto ub1 = static_cast<std::uint32_t>(p.b1);
    auto theta = p.theta;
    if (theta.empty() && (name == "set_checker" || name == "cond_set_checker"))
        for (int i = 0; i < p.n; ++i) {
            std::string s(static_cast<std::size_t>(p.n), '0');
            s[static_cast<std::size_t>(i)] = '1';
            theta.insert(s);
        }
    if (name == "xor" || name == "xor_checker") return xor_checker();
    if (name == "xor_gate") return xor_gate();
    if (name == "cond_xor_checker") return conditionalize(xor_checker(), p.w);
    if (name == "tristate" || name == "tristate_checker") return tristate_checker();
    if (name == "tristate_gate") return tristate_gate();
    if (name == "bstate" || name == "bstate_checker") return bstate_checker(p.b);
    if (name == "switch" || name == "switch_checker") return switch_checker();
    if (name == "switch_gate") return switch_gate();
    if (name == "cond_switch_gate") return cond_switch_gate(p.w);
    if (name == "set_checker") return set_checker(p.n, theta);
    if (name == "cond_set_checker") return cond_set_checker(p.n, theta, p.w);
    if (name == "virtual_equality_checker") return virtual_equality_checker(ub);
    if (name == "cond_virtual_equality_checker") return cond_virtual_equality_checker(ub1, ub);
    if (name == "virtual_or_checker") return virtual_or_checker(ub);
    if (name == "cond_virtual_or_checker") return cond_virtual_or_checker(ub1, ub);
    if (name == "cycles" || name == "cycles_checker") return cycles_checker();
    if (name == "cycles_gate") return cycles_gate();
    throw std::invalid_argument("unknown gadget: " + name);
}

// ---------------------------------------------------------------------------
// Composition

struct Part {
    std::string prefix;
    Gadget gadget;
    std::map<std::string, std::vector<std::string>> bind; // port -> messages or "<prefix>/<output>"
};

/// Wires gadgets together over shared messages. Unlimited edges stay
/// annotated; canonicalize() before handing the result to other tools.
inline Network compose(const std::vector<std::pair<std::string, SizeSpec>>& messages, const std::vector<Part>& parts)
{
    FragmentBuilder b(false);
    for (const auto& [name, size] : messages)
        b.message(name, size);
    for (const auto& part : parts)
        b.embed(part.gadget, part.prefix, part.bind);
    return b.net;
}

// ---------------------------------------------------------------------------
// Acceptance

/// Values of every unbound SignalIn port, one per environment tuple.
struct CandidateFunction {
    std::map<std::string, std::vector<std::uint32_t>> tables;
};

/// Independent uniform messages a checker is tested against, and the
/// messages each bound port reads.
struct Environment {
    std::vector<std::pair<std::string, SizeSpec>> messages;
    std::map<std::string, std::vector<std::string>> bindings;
};

/// Every MessageIn and ConditionIn port (and any SignalIn listed in
/// `as_messages`) becomes a fresh message of the port's size; the
/// remaining SignalIn ports take candidates.
inline Environment default_environment(const Gadget& g, const std::set<std::string>& as_messages = {})
{
    Environment env;
    for (const auto& p : g.ports) {
        bool fresh = p.kind == PortKind::MessageIn || p.kind == PortKind::ConditionIn ||
                     (p.kind == PortKind::SignalIn && as_messages.count(p.name));
        if (!fresh)
            continue;
        env.messages.push_back({p.name, p.size});
        env.bindings[p.name] = {p.name};
    }
    return env;
}

inline std::vector<const Port*> candidate_ports(const Gadget& g, const Environment& env)
{
    std::vector<const Port*> out;
    for (const auto& p : g.ports)
        if (p.kind == PortKind::SignalIn && !env.bindings.count(p.name))
            out.push_back(&p);
    return out;
}

inline TupleSpace environment_space(const Environment& env, std::uint64_t k)
{
    std::vector<std::uint64_t> sizes;
    for (const auto& [n, s] : env.messages)
        sizes.push_back(s.resolve(k));
    return TupleSpace(sizes);
}

/// Every joint assignment of functions to the candidate ports.
inline std::vector<CandidateFunction> all_candidates(const Gadget& g, const Environment& env, std::uint64_t k,
                                                     std::uint64_t cap = 1u << 20)
{
    auto ports = candidate_ports(g, env);
    const std::uint64_t T = environment_space(env, k).count();
    std::uint64_t total = 1;
    std::vector<std::uint64_t> sizes;
    for (const Port* p : ports) {
        sizes.push_back(p->size.resolve(k));
        for (std::uint64_t t = 0; t < T; ++t) {
            total *= sizes.back();
            if (total > cap)
                throw std::length_error("all_candidates: family larger than cap");
        }
    }
    std::vector<CandidateFunction> out;
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        CandidateFunction c;
        std::uint64_t rest = idx;
        // Last port, last tuple is the least significant digit.
        std::vector<std::vector<std::uint32_t>> tabs(ports.size(), std::vector<std::uint32_t>(T));
        for (std::size_t pi = ports.size(); pi-- > 0;)
            for (std::uint64_t t = T; t-- > 0;) {
                tabs[pi][t] = static_cast<std::uint32_t>(rest % sizes[pi]);
                rest /= sizes[pi];
            }
        for (std::size_t pi = 0; pi < ports.size(); ++pi)
            c.tables[ports[pi]->name] = std::move(tabs[pi]);
        out.push_back(std::move(c));
    }
    return out;
}

/// The checker wired to its environment with one pinned candidate encoder
/// `cand/<port>` per candidate port.
struct Harness {
    Network net;
    std::map<std::string, std::string> candidate_edges; // port -> edge id
    std::uint64_t k = 1;

    SolveOptions options_for(const CandidateFunction& c, const Environment& env, SolveOptions base = {}) const
    {
        auto space = environment_space(env, k);
        for (const auto& [port, edge] : candidate_edges) {
            const auto& values = c.tables.at(port);
            if (values.size() != space.count())
                throw std::invalid_argument("candidate for " + port + " has the wrong number of entries");
            Table tab;
            tab.radices = space.sizes();
            tab.codomain = resolved_edge_size(net, *net.find_edge(edge), k);
            for (std::uint64_t t = 0; t < space.count(); ++t) {
                if (values[t] >= tab.codomain)
                    throw std::invalid_argument("candidate for " + port + " is out of range");
                tab.entries[space.tuple(t)] = values[t];
            }
            base.pins[edge] = std::move(tab);
        }
        return base;
    }
};

inline Harness make_harness(const Gadget& g, const Environment& env, std::uint64_t k)
{
    FragmentBuilder b(false);
    std::vector<std::string> all;
    for (const auto& [name, size] : env.messages) {
        b.message(name, size);
        all.push_back(name);
    }
    Harness h;
    h.k = k;
    auto bind = env.bindings;
    for (const Port* p : candidate_ports(g, env)) {
        std::string node = "cand/" + p->name;
        std::string j = "in/" + p->name;
        b.node(node);
        b.feed(node, all);
        b.junction(j);
        h.candidate_edges[p->name] = b.edge(node, j, p->size, false, node);
        bind[p->name] = {j};
    }
    b.embed(g, "g", bind);
    h.net = std::move(b.net);
    return h;
}

struct AcceptanceResult {
    std::vector<std::size_t> accepted;  // family indices, ascending
    std::vector<std::size_t> exhausted; // undecided within the budget
};

/// Network-side acceptance: a candidate is accepted iff the harness with the
/// candidate pinned is solvable at k.
inline AcceptanceResult accepted_set(const Gadget& g, const std::vector<CandidateFunction>& family, std::uint64_t k,
                                     const Environment& env, const SolveOptions& base = {}, unsigned jobs = 1)
{
    Harness h = make_harness(g, env, k);
    std::vector<SolveStatus> status(family.size());
    auto run = [&](std::size_t i) { status[i] = solve_at_k(h.net, k, h.options_for(family[i], env, base)).status; };
    if (jobs <= 1) {
        for (std::size_t i = 0; i < family.size(); ++i)
            run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < family.size();)
                    run(i);
            });
        for (auto& t : pool)
            t.join();
    }
    AcceptanceResult out;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (status[i] == SolveStatus::Solvable)
            out.accepted.push_back(i);
        else if (status[i] == SolveStatus::BudgetExhausted)
            out.exhausted.push_back(i);
    }
    return out;
}

inline AcceptanceResult accepted_set(const Gadget& g, const std::vector<CandidateFunction>& family, std::uint64_t k)
{
    return accepted_set(g, family, k, default_environment(g));
}

namespace detail {

struct ConditionSearch {
    std::vector<Existential> existentials;      // names already expanded
    std::vector<std::vector<std::string>> inputs;
    std::vector<std::uint64_t> sizes;
    std::vector<std::vector<InfoCondition>> by_stage; // checked once stage i is assigned (0 = before any)

    bool search(const UniformSupport& d, std::size_t i) const
    {
        for (const auto& c : by_stage[i])
            if (!check(d, c))
                return false;
        if (i == existentials.size())
            return true;
        std::uint32_t classes = 0;
        auto cls = d.project(d.indices_of(inputs[i]), &classes);
        std::vector<std::uint32_t> label(classes, 0);
        // Restricted growth strings: every labelling up to renaming of values.
        std::function<bool(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t c, std::uint32_t used) -> bool {
            if (c == classes) {
                std::vector<std::uint32_t> values(cls.size());
                for (std::size_t r = 0; r < cls.size(); ++r)
                    values[r] = label[cls[r]];
                return search(d.with_variable({existentials[i].name, sizes[i]}, values), i + 1);
            }
            const std::uint32_t lim = static_cast<std::uint32_t>(std::min<std::uint64_t>(sizes[i], used + 1));
            for (std::uint32_t v = 0; v < lim; ++v) {
                label[c] = v;
                if (rec(c + 1, std::max(used, v + 1)))
                    return true;
            }
            return false;
        };
        return rec(0, 0);
    }
};

} // namespace detail

/// Entropy-side acceptance: on every slice of the condition inputs, search
/// the existentials (up to relabelling) for an assignment meeting every
/// declared condition. Independent of the network construction.
inline bool conditions_accept(const Gadget& g, const Environment& env, const CandidateFunction& cand, std::uint64_t k)
{
    auto space = environment_space(env, k);
    std::vector<Variable> vars;
    for (const auto& [name, size] : env.messages)
        vars.push_back({name, size.resolve(k)});
    auto cports = candidate_ports(g, env);
    for (const Port* p : cports)
        vars.push_back({"signal:" + p->name, p->size.resolve(k)});
    std::vector<Row> rows;
    for (std::uint64_t t = 0; t < space.count(); ++t) {
        Row r = space.tuple(t);
        for (const Port* p : cports)
            r.push_back(cand.tables.at(p->name).at(t));
        rows.push_back(std::move(r));
    }
    UniformSupport base(vars, rows);

    std::set<std::string> ex_names;
    for (const auto& e : g.condition.existentials)
        ex_names.insert(e.name);
    auto expand = [&](const std::string& v) -> std::vector<std::string> {
        if (ex_names.count(v))
            return {"hidden:" + v};
        const Port* p = g.port(v);
        if (!p)
            throw std::invalid_argument("condition refers to unknown variable " + v);
        if (auto it = env.bindings.find(v); it != env.bindings.end())
            return it->second;
        if (p->kind == PortKind::SignalIn)
            return {"signal:" + v};
        if (p->kind == PortKind::ConditionIn)
            return {}; // unbound condition input carries no information
        throw std::invalid_argument("port " + v + " is not bound in the environment");
    };
    auto expand_all = [&](const std::vector<std::string>& vs) {
        std::vector<std::string> out;
        for (const auto& v : vs)
            for (auto& e : expand(v))
                if (std::find(out.begin(), out.end(), e) == out.end())
                    out.push_back(std::move(e));
        return out;
    };

    detail::ConditionSearch s;
    std::map<std::string, std::size_t> stage_of;
    for (const auto& e : g.condition.existentials) {
        s.existentials.push_back({"hidden:" + e.name, e.size, {}});
        s.inputs.push_back(expand_all(e.inputs));
        s.sizes.push_back(e.size.resolve(k));
        stage_of["hidden:" + e.name] = s.existentials.size();
    }
    s.by_stage.resize(s.existentials.size() + 1);
    auto place = [&](InfoCondition c) {
        std::size_t stage = 0;
        for (const auto& v : condition_variables(c))
            if (auto it = stage_of.find(v); it != stage_of.end())
                stage = std::max(stage, it->second);
        s.by_stage[stage].push_back(std::move(c));
    };
    for (const auto& c : g.condition.conditions)
        place(detail::rename_condition(c, expand));
    for (const auto& [vs, bound] : g.condition.size_bounds)
        place(cond::SupportAtMost{expand_all(vs), bound.resolve(k)});

    auto slice_cols = base.indices_of(expand_all(g.condition.slice_by));
    std::set<Row> slices;
    for (const auto& r : base.support()) {
        Row key;
        for (auto c : slice_cols)
            key.push_back(r[c]);
        slices.insert(key);
    }
    for (const auto& key : slices)
        if (!s.search(base.slice(slice_cols, key), 0))
            return false;
    return true;
}

inline std::vector<std::size_t> accepted_by_conditions(const Gadget& g, const std::vector<CandidateFunction>& family,
                                                       std::uint64_t k, const Environment& env)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (conditions_accept(g, env, family[i], k))
            out.push_back(i);
    return out;
}

/// State of a binary switch output relative to (M0, M1) in a solution:
/// 0 if `z` carries M0 (possibly flipped), 1 if it carries M1, none otherwise.
inline std::optional<int> switch_state(const UniformSupport& d, const std::string& z, const std::string& m0,
                                       const std::string& m1)
{
    auto same = [&](const std::string& m) {
        return check(d, determined({m}, {z})) && check(d, determined({z}, {m}));
    };
    if (same(m0))
        return 0;
    if (same(m1))
        return 1;
    return std::nullopt;
}

/// The edge carrying the signal on junction `j`.
inline std::string junction_edge(const Network& net, const std::string& j)
{
    auto in = net.in_edges(j);
    if (in.size() != 1)
        throw std::invalid_argument(j + " is not a junction with one input");
    return in.front()->id;
}

// ---------------------------------------------------------------------------
// Catalog export

inline json condition_to_json(const DeclaredCondition& c)
{
    json j;
    j["existentials"] = json::array();
    for (const auto& e : c.existentials)
        j["existentials"].push_back({{"name", e.name}, {"size", detail::size_to_json(e.size)}, {"inputs", e.inputs}});
    j["conditions"] = json::array();
    for (const auto& x : c.conditions)
        j["conditions"].push_back(describe(x));
    for (const auto& [vars, bound] : c.size_bounds) {
        std::string joined;
        for (const auto& v : vars)
            joined += (joined.empty() ? "" : ",") + v;
        j["conditions"].push_back("|supp(" + joined + ")|<=" + bound.label());
    }
    j["slice_by"] = c.slice_by;
    return j;
}

inline json gadget_to_json(const Gadget& g)
{
    json j;
    j["name"] = g.name;
    j["kind"] = g.is_checker() ? "checker" : "gate";
    j["ports"] = json::array();
    for (const auto& p : g.ports)
        j["ports"].push_back({{"name", p.name}, {"kind", to_string(p.kind)}, {"size", detail::size_to_json(p.size)}});
    j["condition"] = condition_to_json(g.condition);
    j["fragment"] = to_json(g.fragment);
    return j;
}

} // namespace pfnc

#endif // PFNC_GADGETS_HPP
