#ifndef PFNC_NETWORK_IO_HPP
#define PFNC_NETWORK_IO_HPP

#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "network.hpp"

namespace pfnc {

using json = nlohmann::json;

/// Malformed input document. The message carries the offending field path.
class DocumentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& require(const json& obj, const std::string& key, const std::string& where)
{
    if (!obj.is_object())
        throw DocumentError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw DocumentError(where + ": missing field \"" + key + "\"");
    return *it;
}

inline SizeSpec size_from_json(const json& j, const std::string& where)
{
    if (j.is_null())
        return SizeSpec::default_size();
    if (!j.is_number_integer() || j.get<long long>() < 1)
        throw DocumentError(where + ": size must be >=1 or null(default)");
    return SizeSpec::fixed(j.get<std::uint32_t>());
}

inline json size_to_json(const SizeSpec& s) { return s.is_default() ? json(nullptr) : json(s.value()); }

inline MessageSet index_set_from_json(const json& j, const std::string& where)
{
    if (!j.is_array())
        throw DocumentError(where + ": expected an array of message indices");
    MessageSet out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer())
            throw DocumentError(where + "[" + std::to_string(i) + "]: expected an integer");
        out.insert(j[i].get<int>());
    }
    return out;
}

inline json parse_document(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports a byte offset; convert it to a line number.
        std::size_t line = 1;
        for (std::size_t i = 0; i < text.size() && i < e.byte; ++i)
            if (text[i] == '\n')
                ++line;
        throw DocumentError("line " + std::to_string(line) + ": " + e.what());
    }
}

} // namespace detail

inline json to_json(const Network& net)
{
    json j;
    j["version"] = 1;
    j["nodes"] = json::array();
    for (const auto& n : net.nodes)
        j["nodes"].push_back({{"id", n.id}, {"broadcast", n.broadcast}});
    j["edges"] = json::array();
    for (const auto& e : net.edges) {
        json je = {{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"size", detail::size_to_json(e.size)}};
        if (e.unlimited) {
            je["size"] = nullptr;
            je["unlimited"] = true;
        }
        j["edges"].push_back(je);
    }
    j["messages"] = json::array();
    for (const auto& m : net.messages)
        j["messages"].push_back(detail::size_to_json(m));
    if (!net.message_names.empty())
        j["message_names"] = net.message_names;
    j["sources"] = json::object();
    for (const auto& [node, set] : net.sources)
        if (!set.empty())
            j["sources"][node] = std::vector<int>(set.begin(), set.end());
    j["demands"] = json::object();
    for (const auto& [node, set] : net.demands)
        if (!set.empty())
            j["demands"][node] = std::vector<int>(set.begin(), set.end());
    return j;
}

inline Network network_from_json(const json& j)
{
    using detail::require;
    if (!j.is_object())
        throw DocumentError("document: expected an object");
    const auto& version = require(j, "version", "document");
    if (!version.is_number_integer() || version.get<int>() != 1)
        throw DocumentError("version: unsupported version");

    Network net;
    const auto& nodes = require(j, "nodes", "document");
    if (!nodes.is_array())
        throw DocumentError("nodes: expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string where = "nodes[" + std::to_string(i) + "]";
        const auto& id = require(nodes[i], "id", where);
        const auto& bc = require(nodes[i], "broadcast", where);
        if (!id.is_string())
            throw DocumentError(where + ".id: expected a string");
        if (!bc.is_boolean())
            throw DocumentError(where + ".broadcast: expected a boolean");
        net.nodes.push_back({id.get<std::string>(), bc.get<bool>()});
    }

    const auto& edges = require(j, "edges", "document");
    if (!edges.is_array())
        throw DocumentError("edges: expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string where = "edges[" + std::to_string(i) + "]";
        Edge e;
        for (const char* key : {"id", "tail", "head"}) {
            const auto& v = require(edges[i], key, where);
            if (!v.is_string())
                throw DocumentError(where + "." + key + ": expected a string");
        }
        e.id = edges[i]["id"].get<std::string>();
        e.tail = edges[i]["tail"].get<std::string>();
        e.head = edges[i]["head"].get<std::string>();
        e.size = detail::size_from_json(require(edges[i], "size", where), where + ".size");
        if (auto it = edges[i].find("unlimited"); it != edges[i].end()) {
            if (!it->is_boolean())
                throw DocumentError(where + ".unlimited: expected a boolean");
            e.unlimited = it->get<bool>();
        }
        net.edges.push_back(std::move(e));
    }

    const auto& messages = require(j, "messages", "document");
    if (!messages.is_array())
        throw DocumentError("messages: expected an array");
    for (std::size_t i = 0; i < messages.size(); ++i)
        net.messages.push_back(detail::size_from_json(messages[i], "messages[" + std::to_string(i) + "]"));
    if (auto it = j.find("message_names"); it != j.end()) {
        if (!it->is_array() || it->size() != net.messages.size())
            throw DocumentError("message_names: expected one string per message");
        for (const auto& n : *it) {
            if (!n.is_string())
                throw DocumentError("message_names: expected strings");
            net.message_names.push_back(n.get<std::string>());
        }
    }

    for (const char* key : {"sources", "demands"}) {
        const auto& m = require(j, key, "document");
        if (!m.is_object())
            throw DocumentError(std::string(key) + ": expected an object");
        auto& target = std::string(key) == "sources" ? net.sources : net.demands;
        for (auto it = m.begin(); it != m.end(); ++it) {
            auto set = detail::index_set_from_json(it.value(), std::string(key) + "." + it.key());
            if (!set.empty())
                target[it.key()] = std::move(set);
        }
    }
    return net;
}

inline std::string serialize(const Network& net) { return to_json(net).dump(2); }

inline Network deserialize(const std::string& text) { return network_from_json(detail::parse_document(text)); }

namespace detail {
inline std::string dot_quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}
} // namespace detail

/// Graphviz rendering: edge labels are "k" for default-size edges, the
/// integer for fixed ones, empty for unlimited; broadcast nodes are filled.
inline std::string to_dot(const Network& net)
{
    std::ostringstream os;
    os << "digraph network {\n  rankdir=TB;\n";
    for (const auto& n : net.nodes) {
        os << "  " << detail::dot_quote(n.id);
        std::string label;
        if (const auto& a = net.sources_of(n.id); !a.empty()) {
            label += "has:";
            for (int i : a)
                label += " " + net.message_name(i);
        }
        if (const auto& b = net.demands_of(n.id); !b.empty()) {
            label += label.empty() ? "" : "\\n";
            label += "wants:";
            for (int i : b)
                label += " " + net.message_name(i);
        }
        if (n.broadcast)
            os << " [shape=point, style=filled, fillcolor=black";
        else
            os << " [shape=circle";
        if (!label.empty())
            os << ", xlabel=" << detail::dot_quote(label);
        os << "];\n";
    }
    for (const auto& e : net.edges) {
        os << "  " << detail::dot_quote(e.tail) << " -> " << detail::dot_quote(e.head) << " [label="
           << detail::dot_quote(e.unlimited ? "" : e.size.label()) << "];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace pfnc

#endif // PFNC_NETWORK_IO_HPP
