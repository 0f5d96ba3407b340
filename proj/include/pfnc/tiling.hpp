#ifndef PFNC_TILING_HPP
#define PFNC_TILING_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gadgets.hpp"
#include "network.hpp"
#include "network_io.hpp"

namespace pfnc {

/// Nonempty proper subsets of [N], by size then lexicographically. Entry i
/// of phi(c) refers to subsets(N)[i].
inline std::vector<std::vector<int>> color_subsets(int N)
{
    if (N < 2 || N > 16)
        throw std::invalid_argument("color_subsets: N must be in [2, 16]");
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 1; mask + 1 < (1u << N); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < N; ++i)
            if (mask & (1u << i))
                s.push_back(i + 1);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

/// phi(c)_A = 1{c in A} over the nonempty proper subsets A of [N].
inline std::vector<int> phi(int c, int N)
{
    if (c < 1 || c > N)
        throw std::invalid_argument("phi: color " + std::to_string(c) + " outside [1, " + std::to_string(N) + "]");
    std::vector<int> out;
    for (const auto& s : color_subsets(N))
        out.push_back(std::find(s.begin(), s.end(), c) != s.end() ? 1 : 0);
    return out;
}

inline std::string phi_bits(int c, int N)
{
    std::string s;
    for (int b : phi(c, N))
        s += static_cast<char>('0' + b);
    return s;
}

enum class ConditionType { EdgeEq, EdgeOr, FaceOr };
enum class Orientation { Horizontal, Vertical };
enum class FaceType { T11, T22 };

struct TilingCondition {
    ConditionType type = ConditionType::EdgeEq;
    Orientation orientation = Orientation::Horizontal; // edge conditions
    FaceType face = FaceType::T11;                     // face conditions
    std::vector<int> set;                              // sorted
};

struct ConditionProgram {
    int colors = 2;
    std::vector<TilingCondition> conditions;
};

/// colors[y][x] in [1, N]; width and height even.
struct TorusColoring {
    int width = 0;
    int height = 0;
    std::vector<std::vector<int>> colors;

    int at(int x, int y) const
    {
        return colors[static_cast<std::size_t>(((y % height) + height) % height)]
                     [static_cast<std::size_t>(((x % width) + width) % width)];
    }
};

inline void validate_program(const ConditionProgram& p)
{
    if (p.colors < 2 || p.colors > 8)
        throw std::invalid_argument("program: colors must be in [2, 8]");
    for (std::size_t i = 0; i < p.conditions.size(); ++i) {
        const auto& c = p.conditions[i];
        std::set<int> s(c.set.begin(), c.set.end());
        const std::string where = "conditions[" + std::to_string(i) + "]";
        if (s.empty() || static_cast<int>(s.size()) >= p.colors)
            throw std::invalid_argument(where + ": set must be a nonempty proper subset of the colors");
        if (s.size() != c.set.size() || *s.begin() < 1 || *s.rbegin() > p.colors)
            throw std::invalid_argument(where + ": set entries must be distinct colors in [1, N]");
    }
}

inline std::string describe(const TilingCondition& c)
{
    std::string set;
    for (int x : c.set)
        set += (set.empty() ? "" : ",") + std::to_string(x);
    std::string o = c.orientation == Orientation::Horizontal ? "h" : "v";
    switch (c.type) {
    case ConditionType::EdgeEq: return "edge_eq(" + o + ",{" + set + "})";
    case ConditionType::EdgeOr: return "edge_or(" + o + ",{" + set + "})";
    case ConditionType::FaceOr: return std::string("face_or(") + (c.face == FaceType::T11 ? "11" : "22") + ",{" + set + "})";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const ConditionProgram& p)
{
    json j;
    j["colors"] = p.colors;
    j["conditions"] = json::array();
    for (const auto& c : p.conditions) {
        json x;
        switch (c.type) {
        case ConditionType::EdgeEq: x["type"] = "edge_eq"; break;
        case ConditionType::EdgeOr: x["type"] = "edge_or"; break;
        case ConditionType::FaceOr: x["type"] = "face_or"; break;
        }
        if (c.type == ConditionType::FaceOr)
            x["face"] = c.face == FaceType::T11 ? "11" : "22";
        else
            x["orientation"] = c.orientation == Orientation::Horizontal ? "h" : "v";
        x["set"] = c.set;
        j["conditions"].push_back(x);
    }
    return j;
}

inline ConditionProgram program_from_json(const json& j)
{
    ConditionProgram p;
    const auto& n = detail::require(j, "colors", "program");
    if (!n.is_number_integer())
        throw DocumentError("program.colors: expected an integer");
    p.colors = n.get<int>();
    const auto& conds = detail::require(j, "conditions", "program");
    if (!conds.is_array())
        throw DocumentError("program.conditions: expected an array");
    for (std::size_t i = 0; i < conds.size(); ++i) {
        const std::string where = "conditions[" + std::to_string(i) + "]";
        const auto& cj = conds[i];
        TilingCondition c;
        const auto& type = detail::require(cj, "type", where);
        if (type == "edge_eq")
            c.type = ConditionType::EdgeEq;
        else if (type == "edge_or")
            c.type = ConditionType::EdgeOr;
        else if (type == "face_or")
            c.type = ConditionType::FaceOr;
        else
            throw DocumentError(where + ".type: expected edge_eq, edge_or or face_or");
        if (c.type == ConditionType::FaceOr) {
            const auto& f = detail::require(cj, "face", where);
            if (f != "11" && f != "22")
                throw DocumentError(where + ".face: expected \"11\" or \"22\"");
            c.face = f == "11" ? FaceType::T11 : FaceType::T22;
        } else {
            const auto& o = detail::require(cj, "orientation", where);
            if (o != "h" && o != "v")
                throw DocumentError(where + ".orientation: expected \"h\" or \"v\"");
            c.orientation = o == "h" ? Orientation::Horizontal : Orientation::Vertical;
        }
        const auto& s = detail::require(cj, "set", where);
        if (!s.is_array())
            throw DocumentError(where + ".set: expected an array of colors");
        for (const auto& x : s) {
            if (!x.is_number_integer())
                throw DocumentError(where + ".set: expected integers");
            c.set.push_back(x.get<int>());
        }
        std::sort(c.set.begin(), c.set.end());
        p.conditions.push_back(std::move(c));
    }
    try {
        validate_program(p);
    } catch (const std::invalid_argument& e) {
        throw DocumentError(e.what());
    }
    return p;
}

inline json to_json(const TorusColoring& c)
{
    return json{{"width", c.width}, {"height", c.height}, {"colors", c.colors}};
}

inline TorusColoring coloring_from_json(const json& j)
{
    TorusColoring c;
    c.width = detail::require(j, "width", "coloring").get<int>();
    c.height = detail::require(j, "height", "coloring").get<int>();
    c.colors = detail::require(j, "colors", "coloring").get<std::vector<std::vector<int>>>();
    if (c.width <= 0 || c.height <= 0 || c.width % 2 || c.height % 2)
        throw DocumentError("coloring: width and height must be even and positive");
    if (c.colors.size() != static_cast<std::size_t>(c.height))
        throw DocumentError("coloring.colors: expected one row per unit of height");
    for (const auto& row : c.colors)
        if (row.size() != static_cast<std::size_t>(c.width))
            throw DocumentError("coloring.colors: every row needs width entries");
    return c;
}

// ---------------------------------------------------------------------------
// Torus geometry: vertex (x, y); horizontal edges join (x,y)-(x+1,y),
// vertical edges (x,y)-(x,y+1); the face at (x,y) has corners (x..x+1,
// y..y+1). Even faces have x+y even; type 11 are those with x even, type 22
// those with x odd.

struct Cell {
    int x = 0;
    int y = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Constraint {
    std::size_t condition = 0;
    std::vector<Cell> cells;
};

inline std::vector<Constraint> constraints(const ConditionProgram& p, int width, int height)
{
    std::vector<Constraint> out;
    for (std::size_t i = 0; i < p.conditions.size(); ++i) {
        const auto& c = p.conditions[i];
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                auto wrap = [&](int dx, int dy) { return Cell{(x + dx) % width, (y + dy) % height}; };
                if (c.type == ConditionType::FaceOr) {
                    if ((x + y) % 2)
                        continue;
                    if ((c.face == FaceType::T11) != (x % 2 == 0))
                        continue;
                    out.push_back({i, {wrap(0, 0), wrap(1, 0), wrap(0, 1), wrap(1, 1)}});
                } else if (c.orientation == Orientation::Horizontal) {
                    out.push_back({i, {wrap(0, 0), wrap(1, 0)}});
                } else {
                    out.push_back({i, {wrap(0, 0), wrap(0, 1)}});
                }
            }
    }
    return out;
}

inline bool satisfied(const TilingCondition& c, const std::vector<int>& colors)
{
    auto in = [&](int col) { return std::binary_search(c.set.begin(), c.set.end(), col); };
    switch (c.type) {
    case ConditionType::EdgeEq: return in(colors[0]) == in(colors[1]);
    case ConditionType::EdgeOr:
    case ConditionType::FaceOr: return std::any_of(colors.begin(), colors.end(), in);
    }
    return false;
}

inline ValidationReport validate_coloring(const ConditionProgram& p, const TorusColoring& c)
{
    ValidationReport r;
    if (c.width <= 0 || c.height <= 0 || c.width % 2 || c.height % 2) {
        r.add("dimensions", "torus");
        return r;
    }
    for (int y = 0; y < c.height; ++y)
        for (int x = 0; x < c.width; ++x)
            if (c.at(x, y) < 1 || c.at(x, y) > p.colors)
                r.add("color range", "(" + std::to_string(x) + "," + std::to_string(y) + ")");
    if (!r.ok())
        return r;
    for (const auto& k : constraints(p, c.width, c.height)) {
        std::vector<int> cols;
        std::string where;
        for (const auto& cell : k.cells) {
            cols.push_back(c.at(cell.x, cell.y));
            where += "(" + std::to_string(cell.x) + "," + std::to_string(cell.y) + ")";
        }
        if (!satisfied(p.conditions[k.condition], cols))
            r.add(describe(p.conditions[k.condition]), where);
    }
    return r;
}

/// Raised when a brute-force search is asked for a torus above the cap.
class CapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Exhaustive search in row-major order, checking each constraint once its
/// last cell is assigned. Returns the lexicographically first witness.
inline std::optional<TorusColoring> torus_bruteforce(const ConditionProgram& p, int width, int height,
                                                     int cap_cells = 64)
{
    validate_program(p);
    if (width <= 0 || height <= 0 || width % 2 || height % 2)
        throw std::invalid_argument("torus_bruteforce: width and height must be even and positive");
    if (width * height > cap_cells)
        throw CapExceeded("torus_bruteforce: " + std::to_string(width * height) + " cells exceeds the cap of " +
                          std::to_string(cap_cells));
    const int cells = width * height;
    auto pos = [&](const Cell& c) { return c.y * width + c.x; };
    std::vector<std::vector<Constraint>> due(static_cast<std::size_t>(cells));
    for (auto& k : constraints(p, width, height)) {
        int last = 0;
        for (const auto& c : k.cells)
            last = std::max(last, pos(c));
        due[static_cast<std::size_t>(last)].push_back(std::move(k));
    }
    std::vector<int> grid(static_cast<std::size_t>(cells), 0);
    std::vector<int> cols;
    auto ok_at = [&](int i) {
        for (const auto& k : due[static_cast<std::size_t>(i)]) {
            cols.clear();
            for (const auto& c : k.cells)
                cols.push_back(grid[static_cast<std::size_t>(pos(c))]);
            if (!satisfied(p.conditions[k.condition], cols))
                return false;
        }
        return true;
    };
    int i = 0;
    while (i >= 0) {
        if (i == cells) {
            TorusColoring out{width, height, {}};
            for (int y = 0; y < height; ++y)
                out.colors.emplace_back(grid.begin() + y * width, grid.begin() + (y + 1) * width);
            return out;
        }
        auto& g = grid[static_cast<std::size_t>(i)];
        if (++g > p.colors) {
            g = 0;
            --i;
            continue;
        }
        if (ok_at(i))
            ++i;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reduction

inline std::string switch_prefix(const std::vector<int>& subset)
{
    std::string s = "sw{";
    for (std::size_t i = 0; i < subset.size(); ++i)
        s += (i ? "," : "") + std::to_string(subset[i]);
    return s + "}";
}

/// The reduced network before unlimited edges are materialized.
inline Network compile_program(const ConditionProgram& p)
{
    validate_program(p);
    const auto subsets = color_subsets(p.colors);
    const int n = static_cast<int>(subsets.size());
    FragmentBuilder b(false);
    b.message("M0", SizeSpec::fixed(2));
    b.message("M1", SizeSpec::fixed(2));
    b.message("U", SizeSpec::fixed(2));
    b.message("V", SizeSpec::fixed(2));
    b.message("X1", SizeSpec::default_size());
    b.message("Y1", SizeSpec::default_size());

    const std::string X2 = b.embed(cycles_gate(), "cycX", {{"X1", {"X1"}}, {"U", {"U"}}}).at("X2");
    const std::string Y2 = b.embed(cycles_gate(), "cycY", {{"X1", {"Y1"}}, {"U", {"V"}}}).at("X2");
    const std::vector<std::string> select = {"X1", "U", "Y1", "V"};

    std::vector<std::string> z0(static_cast<std::size_t>(n));
    std::map<std::string, std::vector<std::string>> set_bind = {{"M1", {"M1"}}, {"W", select}};
    for (int i = 0; i < n; ++i) {
        const std::string pre = switch_prefix(subsets[static_cast<std::size_t>(i)]);
        auto out = b.embed(cond_switch_gate(4), pre, {{"M0", {"M0"}}, {"M1", {"M1"}}, {"W", select}});
        z0[static_cast<std::size_t>(i)] = out.at("Z0");
        set_bind[set_port(i + 1, 0)] = {out.at("Z0")};
        set_bind[set_port(i + 1, 1)] = {out.at("Z1")};
    }
    std::set<std::string> theta;
    for (int c = 1; c <= p.colors; ++c)
        theta.insert(phi_bits(c, p.colors));
    b.embed(cond_set_checker(n, theta, 4), "set", set_bind);

    for (std::size_t ci = 0; ci < p.conditions.size(); ++ci) {
        const auto& c = p.conditions[ci];
        const auto idx = static_cast<std::size_t>(
            std::find(subsets.begin(), subsets.end(), c.set) - subsets.begin());
        const std::string pre = "c" + std::to_string(ci);
        const std::map<std::string, std::vector<std::string>> common = {
            {"M0", {"M0"}}, {"M1", {"M1"}}, {"Z0", {z0[idx]}}, {"W", select}};
        std::vector<std::vector<std::string>> conds;
        if (c.type == ConditionType::FaceOr) {
            conds.push_back(c.face == FaceType::T11 ? std::vector<std::string>{"X1", "Y1"}
                                                    : std::vector<std::string>{X2, Y2});
        } else if (c.orientation == Orientation::Horizontal) {
            conds = {{"X1", "Y1", Y2}, {X2, "Y1", Y2}};
        } else {
            conds = {{"X1", X2, "Y1"}, {"X1", X2, Y2}};
        }
        for (std::size_t j = 0; j < conds.size(); ++j) {
            auto bind = common;
            bind["W1"] = conds[j];
            const std::string part = pre + "/" + std::string(1, static_cast<char>('a' + j));
            if (c.type == ConditionType::EdgeEq) {
                b.embed(cond_virtual_equality_checker(4, 2), part, bind);
            } else {
                bind.erase("M0");
                const std::uint32_t arity = c.type == ConditionType::FaceOr ? 4 : 2;
                b.embed(cond_virtual_or_checker(4, arity), part, bind);
            }
        }
    }
    return b.net;
}

/// compile_program followed by canonicalize: a simple DAG with every
/// unlimited edge replaced by a relayed bundle of sized edges.
inline Network reduce(const ConditionProgram& p) { return canonicalize(compile_program(p)); }

} // namespace pfnc

#endif // PFNC_TILING_HPP
