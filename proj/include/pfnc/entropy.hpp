#ifndef PFNC_ENTROPY_HPP
#define PFNC_ENTROPY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "coding_scheme.hpp"
#include "network.hpp"

namespace pfnc {

struct Variable {
    std::string name;
    std::uint64_t size = 1;
};

/// A joint distribution that is uniform over a finite set of tuples. Every
/// distribution of messages and signals under deterministic encodings of
/// independent uniform messages has this form.
class UniformSupport {
public:
    UniformSupport(std::vector<Variable> variables, std::vector<Row> support)
        : variables_(std::move(variables)), support_(std::move(support))
    {
        if (support_.empty())
            throw std::invalid_argument("UniformSupport: support must be nonempty");
        for (const auto& row : support_) {
            if (row.size() != variables_.size())
                throw std::invalid_argument("UniformSupport: tuple arity mismatch");
            for (std::size_t i = 0; i < row.size(); ++i)
                if (row[i] >= variables_[i].size)
                    throw std::invalid_argument("UniformSupport: coordinate out of range for " + variables_[i].name);
        }
        std::sort(support_.begin(), support_.end());
        support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
    }

    const std::vector<Variable>& variables() const noexcept { return variables_; }
    const std::vector<Row>& support() const noexcept { return support_; }

    std::size_t index_of(const std::string& name) const
    {
        for (std::size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i].name == name)
                return i;
        throw std::out_of_range("unknown variable: " + name);
    }
    std::vector<std::size_t> indices_of(const std::vector<std::string>& names) const
    {
        std::vector<std::size_t> out;
        for (const auto& n : names)
            out.push_back(index_of(n));
        return out;
    }

    /// Interned projection of every support tuple onto `cols`, labelled in
    /// first-occurrence order.
    std::vector<std::uint32_t> project(const std::vector<std::size_t>& cols, std::uint32_t* distinct = nullptr) const
    {
        std::map<Row, std::uint32_t> ids;
        std::vector<std::uint32_t> out;
        out.reserve(support_.size());
        Row key(cols.size());
        for (const auto& row : support_) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                key[i] = row[cols[i]];
            auto [it, fresh] = ids.emplace(key, static_cast<std::uint32_t>(ids.size()));
            out.push_back(it->second);
        }
        if (distinct)
            *distinct = static_cast<std::uint32_t>(ids.size());
        return out;
    }

    /// Support restricted to tuples where `cols` take the values in `values`.
    UniformSupport slice(const std::vector<std::size_t>& cols, const Row& values) const
    {
        std::vector<Row> rows;
        for (const auto& row : support_) {
            bool keep = true;
            for (std::size_t i = 0; i < cols.size() && keep; ++i)
                keep = row[cols[i]] == values[i];
            if (keep)
                rows.push_back(row);
        }
        return UniformSupport(variables_, std::move(rows));
    }

    /// Appends a variable whose value on each support tuple is given.
    UniformSupport with_variable(Variable v, const std::vector<std::uint32_t>& values) const
    {
        if (values.size() != support_.size())
            throw std::invalid_argument("with_variable: one value per support tuple required");
        auto vars = variables_;
        vars.push_back(std::move(v));
        auto rows = support_;
        for (std::size_t i = 0; i < rows.size(); ++i)
            rows[i].push_back(values[i]);
        return UniformSupport(std::move(vars), std::move(rows));
    }

private:
    std::vector<Variable> variables_;
    std::vector<Row> support_;
};

namespace cond {
struct Determined {
    std::vector<std::string> target;
    std::vector<std::string> given;
};
struct Independent {
    std::vector<std::string> a;
    std::vector<std::string> b;
};
struct Uniform {
    std::vector<std::string> vars;
};
struct SupportAtMost {
    std::vector<std::string> vars;
    std::uint64_t bound = 0;
};
} // namespace cond

/// One exact information condition. Determined(T|S) means H(T|S)=0.
using InfoCondition = std::variant<cond::Determined, cond::Independent, cond::Uniform, cond::SupportAtMost>;

inline InfoCondition determined(std::vector<std::string> target, std::vector<std::string> given)
{
    return cond::Determined{std::move(target), std::move(given)};
}

inline std::vector<std::string> condition_variables(const InfoCondition& c)
{
    return std::visit(
        [](const auto& x) -> std::vector<std::string> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, cond::Determined>) {
                auto v = x.target;
                v.insert(v.end(), x.given.begin(), x.given.end());
                return v;
            } else if constexpr (std::is_same_v<T, cond::Independent>) {
                auto v = x.a;
                v.insert(v.end(), x.b.begin(), x.b.end());
                return v;
            } else {
                return x.vars;
            }
        },
        c);
}

inline std::string describe(const InfoCondition& c)
{
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + v[i];
        return s;
    };
    return std::visit(
        [&](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, cond::Determined>)
                return "H(" + join(x.target) + "|" + join(x.given) + ")=0";
            else if constexpr (std::is_same_v<T, cond::Independent>)
                return "I(" + join(x.a) + ";" + join(x.b) + ")=0";
            else if constexpr (std::is_same_v<T, cond::Uniform>)
                return "Uniform(" + join(x.vars) + ")";
            else
                return "|supp(" + join(x.vars) + ")|<=" + std::to_string(x.bound);
        },
        c);
}

/// Exact check by counting over the support; no floating point.
inline bool check(const UniformSupport& dist, const InfoCondition& c)
{
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, cond::Determined>) {
                auto s = dist.project(dist.indices_of(x.given));
                auto t = dist.project(dist.indices_of(x.target));
                std::map<std::uint32_t, std::uint32_t> seen;
                for (std::size_t i = 0; i < s.size(); ++i) {
                    auto [it, fresh] = seen.emplace(s[i], t[i]);
                    if (!fresh && it->second != t[i])
                        return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, cond::Independent>) {
                std::uint32_t na = 0, nb = 0;
                auto a = dist.project(dist.indices_of(x.a), &na);
                auto b = dist.project(dist.indices_of(x.b), &nb);
                std::vector<std::uint64_t> ca(na), cb(nb);
                std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> cab;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    ++ca[a[i]];
                    ++cb[b[i]];
                    ++cab[{a[i], b[i]}];
                }
                const std::uint64_t total = a.size();
                for (std::uint32_t i = 0; i < na; ++i)
                    for (std::uint32_t j = 0; j < nb; ++j) {
                        auto it = cab.find({i, j});
                        std::uint64_t joint = it == cab.end() ? 0 : it->second;
                        if (joint * total != ca[i] * cb[j])
                            return false;
                    }
                return true;
            } else if constexpr (std::is_same_v<T, cond::Uniform>) {
                std::uint32_t n = 0;
                auto s = dist.project(dist.indices_of(x.vars), &n);
                std::vector<std::uint64_t> counts(n);
                for (auto v : s)
                    ++counts[v];
                return std::all_of(counts.begin(), counts.end(), [&](auto c) { return c == counts.front(); });
            } else {
                std::uint32_t n = 0;
                dist.project(dist.indices_of(x.vars), &n);
                return n <= x.bound;
            }
        },
        c);
}

/// Shannon entropy in bits of the marginal on `vars`. For display only;
/// every decision in the library uses check().
inline double entropy_display(const UniformSupport& dist, const std::vector<std::string>& vars)
{
    std::uint32_t n = 0;
    auto s = dist.project(dist.indices_of(vars), &n);
    std::vector<std::uint64_t> counts(n);
    for (auto v : s)
        ++counts[v];
    const double total = static_cast<double>(s.size());
    double h = 0.0;
    for (auto c : counts) {
        double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h == 0.0 ? 0.0 : h;
}

/// Joint support of all messages and edge signals under `scheme`. Variables
/// are the messages (ascending) followed by the edges in evaluation order.
inline UniformSupport support_of_scheme(const Network& net, const CodingScheme& scheme)
{
    auto report = verify_scheme(net, scheme);
    for (const auto& v : report.violations)
        if (v.rule != "decode" && v.rule != "missing decoding" && v.rule != "decoding outputs")
            throw std::invalid_argument("support_of_scheme: scheme does not match network (" + v.rule + " " + v.element + ")");

    Evaluation ev = evaluate(net, scheme);
    std::vector<Variable> vars;
    for (int i = 1; i <= net.message_count(); ++i)
        vars.push_back({net.message_name(i), net.messages[i - 1].resolve(scheme.k)});
    for (const auto& id : ev.edge_order)
        vars.push_back({id, resolved_edge_size(net, *net.find_edge(id), scheme.k)});
    std::vector<Row> rows;
    rows.reserve(ev.space.count());
    for (std::uint64_t t = 0; t < ev.space.count(); ++t) {
        Row r = ev.space.tuple(t);
        for (const auto& id : ev.edge_order)
            r.push_back(ev.signals.at(id)[t]);
        rows.push_back(std::move(r));
    }
    return UniformSupport(std::move(vars), std::move(rows));
}

} // namespace pfnc

#endif // PFNC_ENTROPY_HPP
