#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <pfnc/coding_scheme.hpp>
#include <pfnc/network_io.hpp>

using namespace pfnc;

namespace {

struct Run {
    int code = -1;
    std::string out;
    json doc() const { return json::parse(out); }
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(PFNC_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(PFNC_DATA_DIR) + "/" + name; }

std::string temp(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("pfnc_cli_test_" + name)).string();
}

} // namespace

TEST(Cli, SolveButterfly)
{
    auto r = run("solve " + data("butterfly.json") + " --k 2");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = r.doc();
    EXPECT_EQ(j["status"], "solvable");
    auto net = deserialize([] {
        std::ifstream in(data("butterfly.json"));
        return std::string(std::istreambuf_iterator<char>(in), {});
    }());
    EXPECT_TRUE(verify_scheme(net, scheme_from_json(net, j["witness"])).ok());
}

TEST(Cli, SweepPigeonholeIsNegativeWithCaveat)
{
    auto r = run("sweep " + data("unsat_pigeonhole.json") + " --k-max 4");
    EXPECT_EQ(r.code, 1);
    auto j = r.doc();
    EXPECT_EQ(j["result"], "not found <= 4");
    EXPECT_EQ(j["per_k"].size(), 4u);
    EXPECT_NE(j["caveat"].get<std::string>().find("semi-decision"), std::string::npos);
}

TEST(Cli, VerifyXorChecker)
{
    auto r = run("verify-checker xor --k 2");
    EXPECT_EQ(r.code, 0);
    auto j = r.doc();
    EXPECT_EQ(j["family_size"], 16);
    EXPECT_EQ(j["accepted_count"], 2);
    EXPECT_EQ(j["oracles_agree"], true);
}

TEST(Cli, BudgetIsNotNegative)
{
    auto r = run("solve " + data("butterfly.json") + " --k 3 --budget 1 --no-symmetry");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.doc()["status"], "budget_exhausted");
}

TEST(Cli, InputErrors)
{
    EXPECT_EQ(run("solve " + data("butterfly.json")).code, 3);
    EXPECT_EQ(run("solve /nonexistent.json --k 1").code, 3);
    EXPECT_EQ(run("frobnicate").code, 3);
    const auto bad = temp("bad.json");
    std::ofstream(bad) << "{\"version\": 1, oops";
    EXPECT_EQ(run("solve " + bad + " --k 1").code, 3);
    EXPECT_EQ(run("gadget-build nope -o " + temp("x.json")).code, 3);
    EXPECT_EQ(run("index " + data("reference_program.json") + " --k 1").code, 3);
}

TEST(Cli, ValidateReportsViolations)
{
    const auto path = temp("invalid.json");
    std::ofstream(path) << R"({"version":1,"messages":[2],"nodes":[{"id":"a","broadcast":false}],
        "edges":[{"id":"x","tail":"a","head":"a","size":2}],"sources":{},"demands":{}})";
    auto r = run("validate " + path);
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.doc()["ok"], false);
    EXPECT_EQ(run("solve " + path + " --k 1").code, 3);
    EXPECT_EQ(run("validate " + data("butterfly.json")).code, 0);
}

TEST(Cli, DeterministicAcrossWorkers)
{
    auto one = run("solve " + data("butterfly.json") + " --k 2 --deterministic --jobs 1");
    auto four = run("solve " + data("butterfly.json") + " --k 2 --deterministic --jobs 4");
    EXPECT_EQ(one.code, 0);
    EXPECT_EQ(one.out, four.out);
    EXPECT_EQ(one.out, run("solve " + data("butterfly.json") + " --k 2 --deterministic --jobs 1").out);
}

TEST(Cli, IndexAndTorus)
{
    EXPECT_EQ(run("index " + data("index_xor.json") + " --k 1").code, 0);
    EXPECT_EQ(run("index " + data("index_pigeonhole.json") + " --k 2").code, 1);
    EXPECT_EQ(run("torus " + data("contradiction_n2.json") + " --width 4 --height 4").code, 1);
    EXPECT_EQ(run("torus " + data("reference_program.json") + " --width 4 --height 4").code, 0);
    EXPECT_EQ(run("torus " + data("minimal_n2.json") + " --width 10 --height 10").code, 2);
}

TEST(Cli, ReduceAndGadgetBuildProduceValidNetworks)
{
    const auto red = temp("reduced.json");
    auto r = run("reduce " + data("face_or_22_n3.json") + " -o " + red);
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.doc()["switches"], 6);
    EXPECT_EQ(run("validate " + red).code, 0);

    const auto gate = temp("xor_gate.json");
    ASSERT_EQ(run("gadget-build xor_gate -o " + gate).code, 0);
    EXPECT_EQ(run("solve " + gate + " --k 2").code, 0);

    const auto theta = temp("theta.json");
    std::ofstream(theta) << R"(["01"])";
    const auto set = temp("set.json");
    auto s = run("gadget-build set_checker --n 2 --theta " + theta + " -o " + set);
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(run("validate " + set).code, 0);
}

TEST(Cli, ExportDot)
{
    auto r = run("export-dot " + data("butterfly.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("digraph"), std::string::npos);
    EXPECT_NE(r.out.find("->"), std::string::npos);
}
