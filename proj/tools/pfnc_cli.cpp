// pfnc: command-line front end.
//
// Exit codes: 0 decided / solvable as queried, 1 decided negative,
// 2 budget or cap exhausted (not a negative answer), 3 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <pfnc/gadgets.hpp>
#include <pfnc/index_coding.hpp>
#include <pfnc/network_io.hpp>
#include <pfnc/solver.hpp>
#include <pfnc/tiling.hpp>

using namespace pfnc;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kExhausted = 2;
constexpr int kInputError = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path);
    out << text;
}

json parse_json_file(const std::string& path)
{
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw DocumentError(path + ": " + e.what());
    }
}

Network load_network(const std::string& path, bool require_valid = true)
{
    Network net = deserialize(read_file(path));
    if (require_valid) {
        auto r = validate(net);
        if (!r.ok()) {
            std::string msg = path + ": invalid network:";
            for (const auto& v : r.violations)
                msg += " [" + v.rule + ": " + v.element + "]";
            throw InputError(msg);
        }
    }
    return net;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

const char* status_name(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Solvable: return "solvable";
    case SolveStatus::UnsolvableAtK: return "unsolvable_at_k";
    case SolveStatus::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

struct SolverFlags {
    std::uint64_t budget = 0;
    bool no_symmetry = false;
    bool deterministic = false;
    unsigned jobs = 1;

    void add(CLI::App* app)
    {
        app->add_option("--budget", budget, "Maximum number of value trials (0 = unlimited)");
        app->add_flag("--no-symmetry", no_symmetry, "Disable symmetry breaking and forwarding");
        app->add_flag("--deterministic", deterministic, "Byte-identical output across runs and worker counts");
        app->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    }
    SolveOptions options() const
    {
        SolveOptions o;
        if (budget > 0)
            o.node_budget = budget;
        o.symmetry_breaking = !no_symmetry;
        o.deterministic = true; // results never depend on scheduling; the flag only trims volatile fields
        o.workers = jobs;
        return o;
    }
};

int cmd_validate(const std::string& path)
{
    Network net = load_network(path, false);
    auto r = validate(net);
    json j{{"command", "validate"}, {"file", path}, {"ok", r.ok()}, {"violations", json::array()}};
    for (const auto& v : r.violations)
        j["violations"].push_back({{"rule", v.rule}, {"element", v.element}});
    emit(j);
    return r.ok() ? kOk : kNegative;
}

int cmd_solve(const std::string& path, std::uint64_t k, const SolverFlags& flags)
{
    Network net = load_network(path);
    auto r = solve_at_k(net, k, flags.options());
    json j{{"command", "solve"}, {"file", path}, {"k", k}, {"status", status_name(r.status)}};
    if (!flags.deterministic)
        j["value_trials"] = r.nodes;
    if (r.scheme)
        j["witness"] = scheme_to_json(*r.scheme);
    emit(j);
    return r.status == SolveStatus::Solvable ? kOk : r.status == SolveStatus::UnsolvableAtK ? kNegative : kExhausted;
}

int cmd_sweep(const std::string& path, std::uint64_t k_max, const SolverFlags& flags)
{
    Network net = load_network(path);
    auto r = solve_up_to(net, k_max, flags.options());
    json j{{"command", "sweep"}, {"file", path}, {"k_max", k_max}, {"per_k", json::array()}};
    for (const auto& [k, st] : r.per_k)
        j["per_k"].push_back({{"k", k}, {"status", status_name(st)}});
    // Nothing depends on k, so the k = 1 answer carries over.
    if (r.k_independent && !r.found && !r.exhausted())
        for (std::uint64_t k = 2; k <= k_max; ++k)
            j["per_k"].push_back({{"k", k}, {"status", status_name(r.per_k.front().second)}, {"inferred", true}});
    j["k_independent"] = r.k_independent;
    if (r.found) {
        j["result"] = "found";
        j["k"] = r.found->k;
        j["witness"] = scheme_to_json(*r.found);
    } else {
        j["result"] = r.exhausted() ? "undecided within budget" : "not found <= " + std::to_string(k_max);
        j["caveat"] = "semi-decision: no solution for k <= " + std::to_string(k_max) +
                      " says nothing about larger k in general; solvability is undecidable";
    }
    emit(j);
    if (r.found)
        return kOk;
    return r.exhausted() ? kExhausted : kNegative;
}

struct GadgetFlags {
    int b = 2;
    int b1 = 2;
    int n = 3;
    std::string theta_file;
    std::uint32_t w = 2;

    void add(CLI::App* app)
    {
        app->add_option("--b", b, "Buffer / OR arity")->check(CLI::Range(2, 8));
        app->add_option("--b1", b1, "Condition alphabet of conditional virtual checkers")->check(CLI::Range(1, 8));
        app->add_option("--n", n, "Number of switches in a set checker")->check(CLI::Range(1, 12));
        app->add_option("--theta", theta_file, "JSON file with the allowed switch states, e.g. [\"100\",\"010\"]");
        app->add_option("--w", w, "Condition alphabet size")->check(CLI::Range(1, 64));
    }
    GadgetParams params() const
    {
        GadgetParams p;
        p.b = b;
        p.b1 = b1;
        p.n = n;
        p.w = w;
        if (!theta_file.empty()) {
            auto j = parse_json_file(theta_file);
            if (!j.is_array())
                throw DocumentError(theta_file + ": expected an array of bit strings");
            for (const auto& s : j) {
                if (!s.is_string())
                    throw DocumentError(theta_file + ": expected an array of bit strings");
                p.theta.insert(s.get<std::string>());
            }
        }
        return p;
    }
};

Environment environment_for(const Gadget& g)
{
    // The select input of a virtual equality checker is driven by a message.
    if (g.port("W") && g.port("W")->kind == PortKind::SignalIn) {
        if (g.port("W1")) {
            Environment env;
            const auto w = g.port("W")->size.value();
            const auto b1 = g.port("W1")->size.value();
            env.messages = {{"M0", SizeSpec::fixed(2)}, {"M1", SizeSpec::fixed(2)}, {"W1", SizeSpec::fixed(b1)},
                            {"W2", SizeSpec::fixed(w / b1)}};
            env.bindings = {{"M0", {"M0"}}, {"M1", {"M1"}}, {"W", {"W1", "W2"}}, {"W1", {"W1"}}};
            return env;
        }
        return default_environment(g, {"W"});
    }
    return default_environment(g);
}

int cmd_gadget_build(const std::string& name, const GadgetFlags& flags, const std::string& out)
{
    Gadget g = make_gadget(name, flags.params());
    Network net;
    if (g.is_checker()) {
        net = make_harness(g, environment_for(g), 1).net;
    } else {
        std::vector<std::pair<std::string, SizeSpec>> msgs;
        std::map<std::string, std::vector<std::string>> bind;
        for (const auto& p : g.ports)
            if (p.kind == PortKind::MessageIn) {
                msgs.push_back({p.name, p.size});
                bind[p.name] = {p.name};
            }
        net = compose(msgs, {{"", g, bind}});
    }
    write_file(out, serialize(net) + "\n");
    json j = gadget_to_json(g);
    j.erase("fragment");
    emit({{"command", "gadget-build"}, {"output", out}, {"nodes", net.nodes.size()}, {"edges", net.edges.size()},
          {"gadget", j}});
    return kOk;
}

std::vector<CandidateFunction> load_family(const std::string& path, const Gadget& g, const Environment& env,
                                           std::uint64_t k)
{
    auto j = parse_json_file(path);
    if (!j.is_array())
        throw DocumentError(path + ": expected an array of candidates");
    const auto T = environment_space(env, k).count();
    std::vector<CandidateFunction> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        CandidateFunction c;
        for (const Port* p : candidate_ports(g, env)) {
            const std::string where = path + "[" + std::to_string(i) + "]." + p->name;
            if (!j[i].contains(p->name) || !j[i][p->name].is_array() || j[i][p->name].size() != T)
                throw DocumentError(where + ": expected " + std::to_string(T) + " values");
            for (const auto& v : j[i][p->name]) {
                if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= p->size.resolve(k))
                    throw DocumentError(where + ": value out of range");
                c.tables[p->name].push_back(v.get<std::uint32_t>());
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

int cmd_verify_checker(const std::string& name, std::uint64_t k, const std::string& family_file,
                       const GadgetFlags& gflags, const SolverFlags& sflags)
{
    Gadget g = make_gadget(name, gflags.params());
    if (!g.is_checker())
        throw InputError(name + " is a gate; verify-checker needs a checker");
    Environment env = environment_for(g);
    auto family = family_file.empty() ? all_candidates(g, env, k) : load_family(family_file, g, env, k);
    auto net = accepted_set(g, family, k, env, sflags.options(), sflags.jobs);
    auto by_conditions = accepted_by_conditions(g, family, k, env);
    const bool agree = net.exhausted.empty() && net.accepted == by_conditions;
    json j{{"command", "verify-checker"},
           {"gadget", g.name},
           {"k", k},
           {"family_size", family.size()},
           {"accepted", net.accepted},
           {"accepted_count", net.accepted.size()},
           {"exhausted", net.exhausted},
           {"condition_accepted", by_conditions},
           {"oracles_agree", agree}};
    j["accepted_tables"] = json::array();
    for (auto i : net.accepted)
        j["accepted_tables"].push_back(family[i].tables);
    emit(j);
    if (!net.exhausted.empty())
        return kExhausted;
    return agree ? kOk : kNegative;
}

int cmd_reduce(const std::string& path, const std::string& out, bool annotated)
{
    auto p = program_from_json(parse_json_file(path));
    Network net = annotated ? compile_program(p) : reduce(p);
    write_file(out, serialize(net) + "\n");
    emit({{"command", "reduce"},
          {"program", path},
          {"output", out},
          {"colors", p.colors},
          {"switches", color_subsets(p.colors).size()},
          {"nodes", net.nodes.size()},
          {"edges", net.edges.size()},
          {"canonical", !annotated}});
    return kOk;
}

int cmd_torus(const std::string& path, int width, int height, int cap)
{
    auto p = program_from_json(parse_json_file(path));
    json j{{"command", "torus"}, {"program", path}, {"width", width}, {"height", height}};
    try {
        auto found = torus_bruteforce(p, width, height, cap);
        j["satisfiable"] = found.has_value();
        if (found)
            j["coloring"] = to_json(*found);
        else
            j["note"] = "no coloring at this size only";
        emit(j);
        return found ? kOk : kNegative;
    } catch (const CapExceeded& e) {
        j["error"] = e.what();
        emit(j);
        return kExhausted;
    }
}

int cmd_index(const std::string& path, std::uint64_t k)
{
    auto inst = index_instance_from_json(parse_json_file(path));
    json j{{"command", "index"}, {"file", path}, {"k", k}};
    try {
        auto r = solvable_at_k(inst, k);
        j["alphabet"] = r.alphabet;
        j["solvable"] = r.solvable;
        if (r.encoder)
            j["encoder"] = *r.encoder;
        emit(j);
        return r.solvable ? kOk : kNegative;
    } catch (const std::length_error& e) {
        j["error"] = e.what();
        emit(j);
        return kExhausted;
    }
}

int cmd_export_dot(const std::string& path, const std::string& out)
{
    Network net = load_network(path, false);
    const std::string dot = to_dot(net);
    if (out.empty()) {
        std::cout << dot;
        return kOk;
    }
    write_file(out, dot);
    emit({{"command", "export-dot"}, {"file", path}, {"output", out}});
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Partially fixed-size network coding toolkit"};
    app.require_subcommand(1);

    std::string file, out, name, family;
    std::uint64_t k = 1, k_max = 1;
    int width = 4, height = 4, cap = 64;
    bool annotated = false;
    SolverFlags sflags;
    GadgetFlags gflags;

    auto* validate_cmd = app.add_subcommand("validate", "Check a network document");
    validate_cmd->add_option("net", file)->required();

    auto* solve_cmd = app.add_subcommand("solve", "Decide solvability at one k");
    solve_cmd->add_option("net", file)->required();
    solve_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);
    sflags.add(solve_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "Try k = 1..k-max");
    sweep_cmd->add_option("net", file)->required();
    sweep_cmd->add_option("--k-max", k_max)->required()->check(CLI::PositiveNumber);
    sflags.add(sweep_cmd);

    auto* build_cmd = app.add_subcommand("gadget-build", "Write a gadget network");
    build_cmd->add_option("name", name)->required();
    build_cmd->add_option("-o,--output", out)->required();
    gflags.add(build_cmd);

    auto* verify_cmd = app.add_subcommand("verify-checker", "Accepted candidates under both oracles");
    verify_cmd->add_option("name", name)->required();
    verify_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);
    verify_cmd->add_option("--family", family, "JSON array of {port: [value per environment tuple]}");
    gflags.add(verify_cmd);
    sflags.add(verify_cmd);

    auto* reduce_cmd = app.add_subcommand("reduce", "Compile a condition program to a network");
    reduce_cmd->add_option("program", file)->required();
    reduce_cmd->add_option("-o,--output", out)->required();
    reduce_cmd->add_flag("--annotated", annotated, "Keep unlimited edges instead of canonicalizing");

    auto* torus_cmd = app.add_subcommand("torus", "Search colorings of a small torus");
    torus_cmd->add_option("program", file)->required();
    torus_cmd->add_option("--width", width)->required()->check(CLI::PositiveNumber);
    torus_cmd->add_option("--height", height)->required()->check(CLI::PositiveNumber);
    torus_cmd->add_option("--cap", cap, "Maximum number of cells")->check(CLI::PositiveNumber);

    auto* index_cmd = app.add_subcommand("index", "Decide an index coding instance at one k");
    index_cmd->add_option("instance", file)->required();
    index_cmd->add_option("--k", k)->required()->check(CLI::PositiveNumber);

    auto* dot_cmd = app.add_subcommand("export-dot", "Render a network as Graphviz DOT");
    dot_cmd->add_option("net", file)->required();
    dot_cmd->add_option("-o,--output", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*validate_cmd)
            return cmd_validate(file);
        if (*solve_cmd)
            return cmd_solve(file, k, sflags);
        if (*sweep_cmd)
            return cmd_sweep(file, k_max, sflags);
        if (*build_cmd)
            return cmd_gadget_build(name, gflags, out);
        if (*verify_cmd)
            return cmd_verify_checker(name, k, family, gflags, sflags);
        if (*reduce_cmd)
            return cmd_reduce(file, out, annotated);
        if (*torus_cmd)
            return cmd_torus(file, width, height, cap);
        if (*index_cmd)
            return cmd_index(file, k);
        if (*dot_cmd)
            return cmd_export_dot(file, out);
    } catch (const std::length_error& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        emit({{"error", e.what()}, {"cap_exceeded", true}});
        return kExhausted;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        emit({{"error", e.what()}});
        return kInputError;
    }
    return kInputError;
}
