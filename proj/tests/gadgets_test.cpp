#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include <pfnc/gadgets.hpp>

#include "support.hpp"

using namespace pfnc;

namespace {

std::vector<std::uint32_t> table_of(const TupleSpace& s, const std::function<std::uint32_t(const Row&)>& f)
{
    std::vector<std::uint32_t> out;
    for (std::uint64_t t = 0; t < s.count(); ++t)
        out.push_back(f(s.tuple(t)));
    return out;
}

/// Support over the messages plus one column per named junction.
UniformSupport realized(const Network& net, const CodingScheme& s, const std::vector<std::string>& junctions)
{
    Evaluation ev = evaluate(net, s);
    std::vector<Variable> vars;
    for (int i = 1; i <= net.message_count(); ++i)
        vars.push_back({net.message_name(i), net.messages[static_cast<std::size_t>(i - 1)].resolve(s.k)});
    for (const auto& j : junctions)
        vars.push_back({j, resolved_edge_size(net, *net.find_edge(junction_edge(net, j)), s.k)});
    std::vector<Row> rows;
    for (std::uint64_t t = 0; t < ev.space.count(); ++t) {
        Row r = ev.space.tuple(t);
        for (const auto& j : junctions)
            r.push_back(ev.signals.at(junction_edge(net, j))[t]);
        rows.push_back(r);
    }
    return UniformSupport(vars, rows);
}

Network standalone(const Gadget& g)
{
    std::vector<std::pair<std::string, SizeSpec>> msgs;
    std::map<std::string, std::vector<std::string>> bind;
    for (const auto& p : g.ports)
        if (p.kind == PortKind::MessageIn) {
            msgs.push_back({p.name, p.size});
            bind[p.name] = {p.name};
        }
    return compose(msgs, {{"", g, bind}});
}

/// Index of a binary function of (M1, M2) in all_candidates order.
std::size_t binary_index(const std::vector<std::uint32_t>& v)
{
    std::size_t idx = 0;
    for (auto x : v)
        idx = idx * 2 + x;
    return idx;
}

/// Candidates Z0(m0, m1, w) = m_{theta_w} xor eta_w for every theta and two
/// eta patterns; W is the flat index of the trailing environment coordinates.
struct ThetaFamily {
    std::vector<CandidateFunction> family;
    std::vector<std::uint32_t> thetas;
};

ThetaFamily theta_family(const Environment& env, std::uint32_t wcount, std::size_t m0_col, std::size_t m1_col,
                         std::size_t w_first_col)
{
    ThetaFamily out;
    auto space = environment_space(env, 1);
    for (std::uint32_t theta = 0; theta < (1u << wcount); ++theta)
        for (int eta_kind = 0; eta_kind < 2; ++eta_kind) {
            auto f = [&](const Row& r) {
                std::uint32_t w = 0;
                for (std::size_t c = w_first_col; c < r.size(); ++c)
                    w = w * static_cast<std::uint32_t>(space.sizes()[c]) + r[c];
                std::uint32_t bit = (theta >> w) & 1u;
                std::uint32_t eta = eta_kind ? (w % 2) : 0u;
                return (bit ? r[m1_col] : r[m0_col]) ^ eta;
            };
            CandidateFunction c;
            c.tables["Z0"] = table_of(space, f);
            out.family.push_back(c);
            out.thetas.push_back(theta);
        }
    return out;
}

} // namespace

TEST(Gadgets, XorGateIsTheButterfly)
{
    auto net = standalone(xor_gate());
    ASSERT_TRUE(validate(net).ok());
    auto r = solve_at_k(net, 2);
    ASSERT_TRUE(r.solvable());
    EXPECT_TRUE(verify_scheme(net, *r.scheme).ok());
    auto d = realized(net, *r.scheme, {"Y"});
    EXPECT_TRUE(check(d, determined({"M1"}, {"Y", "M2"})));
    EXPECT_TRUE(check(d, determined({"M2"}, {"Y", "M1"})));
    // One bottleneck edge, two sinks each with one side message.
    auto canon = canonicalize(net);
    EXPECT_TRUE(is_simple(canon));
    EXPECT_TRUE(validate(canon).ok());
}

TEST(Gadgets, XorCheckerAcceptsParityOnly)
{
    auto g = xor_checker();
    auto env = default_environment(g);
    auto family = all_candidates(g, env, 1);
    ASSERT_EQ(family.size(), 16u);
    auto net = accepted_set(g, family, 1, env);
    EXPECT_TRUE(net.exhausted.empty());
    EXPECT_EQ(net.accepted, accepted_by_conditions(g, family, 1, env));
    // Tuples (M1, M2) in order 00, 01, 10, 11.
    EXPECT_EQ(net.accepted, (std::vector<std::size_t>{binary_index({0, 1, 1, 0}), binary_index({1, 0, 0, 1})}));
}

TEST(Gadgets, TristateDoubleOracle)
{
    auto g = tristate_checker();
    auto env = default_environment(g);
    auto family = all_candidates(g, env, 1);
    ASSERT_EQ(family.size(), 81u);
    auto net = accepted_set(g, family, 1, env);
    EXPECT_TRUE(net.exhausted.empty());
    EXPECT_EQ(net.accepted, accepted_by_conditions(g, family, 1, env));
    // Independent characterisation: Z determines Y, takes one value on one
    // side of Y, and a bijection of X on the other.
    auto space = environment_space(env, 1);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& z = family[i].tables.at("Z");
        bool ok = false;
        for (std::uint32_t y = 0; y < 2 && !ok; ++y) {
            std::set<std::uint32_t> on_y, off_y;
            std::uint32_t x0 = 0, x1 = 0;
            for (std::uint64_t t = 0; t < space.count(); ++t) {
                Row r = space.tuple(t);
                (r[1] == y ? on_y : off_y).insert(z[t]);
                if (r[1] != y)
                    (r[0] ? x1 : x0) = z[t];
            }
            bool disjoint = std::none_of(on_y.begin(), on_y.end(), [&](auto v) { return off_y.count(v); });
            ok = disjoint && on_y.size() == 1 && off_y.size() == 2 && x0 != x1;
        }
        if (ok)
            expect.push_back(i);
    }
    EXPECT_EQ(net.accepted, expect);
    EXPECT_EQ(expect.size(), 12u);
}

TEST(Gadgets, BstateThreeDoubleOracle)
{
    auto g = bstate_checker(3);
    auto env = default_environment(g);
    auto family = all_candidates(g, env, 1);
    ASSERT_EQ(family.size(), 4096u);
    auto net = accepted_set(g, family, 1, env, {}, 4);
    EXPECT_TRUE(net.exhausted.empty());
    EXPECT_EQ(net.accepted, accepted_by_conditions(g, family, 1, env));
    EXPECT_FALSE(net.accepted.empty());
}

TEST(Gadgets, SwitchAcceptsEightPairs)
{
    auto g = switch_checker();
    auto env = default_environment(g);
    auto family = all_candidates(g, env, 1);
    ASSERT_EQ(family.size(), 256u);
    auto net = accepted_set(g, family, 1, env);
    EXPECT_EQ(net.accepted, accepted_by_conditions(g, family, 1, env));
    ASSERT_EQ(net.accepted.size(), 8u);
    auto space = environment_space(env, 1);
    for (auto i : net.accepted) {
        const auto& z0 = family[i].tables.at("Z0");
        const auto& z1 = family[i].tables.at("Z1");
        bool straight = true, swapped = true;
        for (std::uint64_t t = 0; t < space.count(); ++t) {
            Row r = space.tuple(t);
            straight &= (z0[t] ^ z0[0]) == r[0] && (z1[t] ^ z1[0]) == r[1];
            swapped &= (z0[t] ^ z0[0]) == r[1] && (z1[t] ^ z1[0]) == r[0];
        }
        EXPECT_TRUE(straight || swapped) << i;
    }
}

TEST(Gadgets, CyclesCountsPointwiseDistinctPermutationPairs)
{
    auto g = cycles_checker();
    for (std::uint64_t k : {2u, 3u}) {
        auto env = default_environment(g);
        auto family = all_candidates(g, env, k);
        auto net = accepted_set(g, family, k, env);
        EXPECT_EQ(net.accepted, accepted_by_conditions(g, family, k, env));
        // Brute force: X2 = pi_U(X1) with pi_0, pi_1 permutations differing everywhere.
        std::vector<std::size_t> brute;
        auto space = environment_space(env, k);
        for (std::size_t i = 0; i < family.size(); ++i) {
            const auto& x2 = family[i].tables.at("X2");
            std::vector<std::vector<std::uint32_t>> pi(2, std::vector<std::uint32_t>(k));
            for (std::uint64_t t = 0; t < space.count(); ++t) {
                Row r = space.tuple(t);
                pi[r[1]][r[0]] = x2[t];
            }
            bool ok = true;
            for (auto& p : pi) {
                auto s = p;
                std::sort(s.begin(), s.end());
                ok &= std::adjacent_find(s.begin(), s.end()) == s.end();
            }
            for (std::uint32_t x = 0; x < k; ++x)
                ok &= pi[0][x] != pi[1][x];
            if (ok)
                brute.push_back(i);
        }
        EXPECT_EQ(net.accepted, brute);
        EXPECT_EQ(brute.size(), k == 2 ? 2u : 12u);
    }
}

TEST(Gadgets, SetCheckerArrayStatesAreOneHot)
{
    const std::set<std::string> theta = {"100", "010", "001"};
    std::vector<Part> parts;
    std::map<std::string, std::vector<std::string>> sc = {{"M1", {"M1"}}};
    for (int i = 1; i <= 3; ++i) {
        std::string p = "s" + std::to_string(i);
        parts.push_back({p, switch_gate(), {{"M0", {"M0"}}, {"M1", {"M1"}}}});
        sc[set_port(i, 0)] = {p + "/Z0"};
        sc[set_port(i, 1)] = {p + "/Z1"};
    }
    parts.push_back({"set", set_checker(3, theta), sc});
    auto net = compose({{"M0", SizeSpec::fixed(2)}, {"M1", SizeSpec::fixed(2)}}, parts);
    ASSERT_TRUE(validate(net).ok());
    EXPECT_TRUE(is_simple(canonicalize(net)));
    auto all = enumerate_solutions(net, 1);
    ASSERT_FALSE(all.budget_hit);
    std::set<std::string> states;
    for (const auto& s : all.schemes) {
        auto d = realized(net, s, {"s1/Z0", "s2/Z0", "s3/Z0"});
        std::string bits;
        for (int i = 1; i <= 3; ++i) {
            auto st = switch_state(d, "s" + std::to_string(i) + "/Z0", "M0", "M1");
            ASSERT_TRUE(st.has_value());
            bits += static_cast<char>('0' + *st);
        }
        states.insert(bits);
    }
    EXPECT_EQ(states, theta);
}

TEST(Gadgets, VirtualEqualityAndOr)
{
    for (std::uint32_t b : {2u, 3u}) {
        auto eq = virtual_equality_checker(b);
        auto env = default_environment(eq, {"W"});
        ASSERT_EQ(env.messages.size(), 3u); // M0, M1, W
        auto fam = theta_family(env, b, 0, 1, 2);
        auto acc = accepted_set(eq, fam.family, 1, env);
        EXPECT_EQ(acc.accepted, accepted_by_conditions(eq, fam.family, 1, env));
        for (std::size_t i = 0; i < fam.family.size(); ++i) {
            bool constant = fam.thetas[i] == 0 || fam.thetas[i] == (1u << b) - 1;
            bool in = std::binary_search(acc.accepted.begin(), acc.accepted.end(), i);
            EXPECT_EQ(in, constant) << "eq b=" << b << " theta=" << fam.thetas[i];
        }

        auto orc = virtual_or_checker(b);
        Environment oenv;
        oenv.messages = {{"M0", SizeSpec::fixed(2)}, {"M1", SizeSpec::fixed(2)}, {"W", SizeSpec::fixed(b)}};
        oenv.bindings = {{"M1", {"M1"}}, {"W", {"W"}}};
        auto ofam = theta_family(oenv, b, 0, 1, 2);
        auto oacc = accepted_set(orc, ofam.family, 1, oenv);
        EXPECT_EQ(oacc.accepted, accepted_by_conditions(orc, ofam.family, 1, oenv));
        for (std::size_t i = 0; i < ofam.family.size(); ++i) {
            bool in = std::binary_search(oacc.accepted.begin(), oacc.accepted.end(), i);
            EXPECT_EQ(in, ofam.thetas[i] != 0) << "or b=" << b << " theta=" << ofam.thetas[i];
        }
    }
}

TEST(Gadgets, ConditionalVirtualCheckersPerSlice)
{
    const std::uint32_t b1 = 2;
    for (std::uint32_t b2 : {2u, 3u}) {
        Environment env;
        env.messages = {{"M0", SizeSpec::fixed(2)},
                        {"M1", SizeSpec::fixed(2)},
                        {"W1", SizeSpec::fixed(b1)},
                        {"W2", SizeSpec::fixed(b2)}};
        env.bindings = {{"M0", {"M0"}}, {"M1", {"M1"}}, {"W", {"W1", "W2"}}, {"W1", {"W1"}}};
        auto fam = theta_family(env, b1 * b2, 0, 1, 2);
        const std::uint32_t slice_mask = (1u << b2) - 1;
        auto per_slice = [&](std::uint32_t theta, auto pred) {
            for (std::uint32_t w1 = 0; w1 < b1; ++w1)
                if (!pred((theta >> (w1 * b2)) & slice_mask))
                    return false;
            return true;
        };

        auto eq = cond_virtual_equality_checker(b1, b2);
        auto acc = accepted_set(eq, fam.family, 1, env, {}, 4);
        EXPECT_EQ(acc.accepted, accepted_by_conditions(eq, fam.family, 1, env));
        for (std::size_t i = 0; i < fam.family.size(); ++i) {
            bool want = per_slice(fam.thetas[i], [&](std::uint32_t s) { return s == 0 || s == slice_mask; });
            EXPECT_EQ(std::binary_search(acc.accepted.begin(), acc.accepted.end(), i), want)
                << "cond eq b2=" << b2 << " theta=" << fam.thetas[i];
        }

        auto orc = cond_virtual_or_checker(b1, b2);
        auto oenv = env;
        oenv.bindings.erase("M0");
        auto oacc = accepted_set(orc, fam.family, 1, oenv, {}, 4);
        EXPECT_EQ(oacc.accepted, accepted_by_conditions(orc, fam.family, 1, oenv));
        for (std::size_t i = 0; i < fam.family.size(); ++i) {
            bool want = per_slice(fam.thetas[i], [](std::uint32_t s) { return s != 0; });
            EXPECT_EQ(std::binary_search(oacc.accepted.begin(), oacc.accepted.end(), i), want)
                << "cond or b2=" << b2 << " theta=" << fam.thetas[i];
        }
    }
}

TEST(Gadgets, ConditionalizationLaw)
{
    auto base = xor_checker();
    auto benv = default_environment(base);
    auto bfam = all_candidates(base, benv, 1);
    auto bacc = accepted_set(base, bfam, 1, benv).accepted;
    std::set<std::size_t> unconditional(bacc.begin(), bacc.end());

    auto g = conditionalize(base, 2);
    auto env = default_environment(g); // M1, M2, W
    auto family = all_candidates(g, env, 1);
    ASSERT_EQ(family.size(), 256u);
    auto acc = accepted_set(g, family, 1, env);
    EXPECT_EQ(acc.accepted, accepted_by_conditions(g, family, 1, env));
    auto space = environment_space(env, 1);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& y = family[i].tables.at("Y");
        bool all = true;
        for (std::uint32_t w = 0; w < 2; ++w) {
            std::vector<std::uint32_t> slice;
            for (std::uint64_t t = 0; t < space.count(); ++t)
                if (space.tuple(t)[2] == w)
                    slice.push_back(y[t]);
            all &= unconditional.count(binary_index(slice)) > 0;
        }
        if (all)
            expect.push_back(i);
    }
    EXPECT_EQ(acc.accepted, expect);
    EXPECT_EQ(expect.size(), 4u);
}

TEST(Gadgets, GatesAreSoundAndNonVacuous)
{
    struct Case {
        Gadget g;
        std::uint64_t k;
    };
    std::vector<Case> cases = {{xor_gate(), 1}, {tristate_gate(), 1}, {switch_gate(), 1}, {cycles_gate(), 2},
                               {cycles_gate(), 3}};
    for (const auto& [g, k] : cases) {
        auto net = standalone(g);
        ASSERT_TRUE(validate(net).ok()) << g.name;
        auto all = enumerate_solutions(net, k, 50);
        ASSERT_FALSE(all.schemes.empty()) << g.name;
        std::vector<std::string> hidden;
        for (const auto& e : g.condition.existentials)
            hidden.push_back(e.name);
        for (const auto& s : all.schemes) {
            auto d = realized(net, s, hidden);
            for (const auto& c : g.condition.conditions)
                EXPECT_TRUE(check(d, c)) << g.name << " " << describe(c);
            for (const auto& [vars, bound] : g.condition.size_bounds)
                EXPECT_TRUE(check(d, cond::SupportAtMost{vars, bound.resolve(k)})) << g.name;
        }
    }
}

TEST(Gadgets, ConditionalizeRejectsCollision)
{
    auto c = conditionalize(xor_checker(), 2);
    EXPECT_THROW(conditionalize(c, 2), BindingError);
    EXPECT_THROW(conditionalize(xor_checker(), 0), std::invalid_argument);
    // Every non-broadcast node receives the condition input.
    for (const auto& n : c.fragment.nodes)
        if (!n.broadcast) {
            bool fed = false;
            for (const auto& e : c.fragment.edges)
                fed |= e.tail == "W" && e.head == n.id && e.unlimited;
            EXPECT_TRUE(fed) << n.id;
        }
}

TEST(Gadgets, BindingErrors)
{
    // The OR select feeds a buffer's message input, so a gate output is refused.
    std::vector<Part> parts = {{"x", xor_gate(), {{"M1", {"A"}}, {"M2", {"B"}}}},
                               {"or", virtual_or_checker(2), {{"M1", {"A"}}, {"Z0", {"x/Y"}}, {"W", {"x/Y"}}}}};
    std::vector<std::pair<std::string, SizeSpec>> msgs = {{"A", SizeSpec::fixed(2)}, {"B", SizeSpec::fixed(2)}};
    EXPECT_THROW(compose(msgs, parts), BindingError);
    EXPECT_THROW(compose(msgs, {{"x", xor_gate(), {{"M1", {"A"}}}}}), BindingError);
    EXPECT_THROW(compose(msgs, {{"x", xor_checker(), {{"M1", {"A"}}, {"M2", {"B"}}}}}), BindingError);
    EXPECT_THROW(compose(msgs, {{"x", xor_gate(), {{"M1", {"A"}}, {"M2", {"B"}}, {"Q", {"A"}}}}}), BindingError);
    EXPECT_THROW(compose({{"A", SizeSpec::fixed(3)}, {"B", SizeSpec::fixed(2)}},
                         {{"x", xor_gate(), {{"M1", {"A"}}, {"M2", {"B"}}}}}),
                 BindingError);
    EXPECT_THROW(set_checker(3, {}), std::invalid_argument);
    EXPECT_THROW(set_checker(2, {"1"}), std::invalid_argument);
}

TEST(Gadgets, SwitchWithSingleStateSetChecker)
{
    auto net = compose({{"M0", SizeSpec::fixed(2)}, {"M1", SizeSpec::fixed(2)}},
                       {{"s", switch_gate(), {{"M0", {"M0"}}, {"M1", {"M1"}}}},
                        {"c", set_checker(1, {"1"}), {{"M1", {"M1"}}, {"Z1_0", {"s/Z0"}}, {"Z1_1", {"s/Z1"}}}}});
    ASSERT_TRUE(validate(net).ok());
    auto all = enumerate_solutions(net, 1);
    ASSERT_FALSE(all.schemes.empty());
    for (const auto& s : all.schemes)
        EXPECT_EQ(switch_state(realized(net, s, {"s/Z0"}), "s/Z0", "M0", "M1"), std::optional<int>(1));
}

TEST(Gadgets, CatalogExport)
{
    for (const auto& name : gadget_names()) {
        auto g = make_gadget(name);
        auto j = gadget_to_json(g);
        EXPECT_EQ(j["name"], g.name);
        EXPECT_EQ(j["ports"].size(), g.ports.size());
        EXPECT_EQ(network_from_json(j["fragment"]), g.fragment) << name;
        EXPECT_FALSE(to_dot(g.fragment).empty());
    }
    EXPECT_THROW(make_gadget("nope"), std::invalid_argument);
}
