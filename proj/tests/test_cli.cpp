#include <pseudomoments/cli.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using pseudomoments::cli::Json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = pseudomoments::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Runs the built executable and captures stdout.
Outcome spawn(const std::string& args)
{
    const std::string command = std::string(PSEUDOMOMENTS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return {-1, "", ""};
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

} // namespace

TEST(Cli, DocumentedExamples)
{
    EXPECT_EQ(invoke({"count", "magic", "--k", "3", "--j", "1"}).out, "6\n");
    EXPECT_EQ(invoke({"ehrhart", "volume", "--family", "pseudomagic", "--k", "2"}).out, "1/6\n");
    EXPECT_EQ(invoke({"zeta", "mv", "--k", "2", "--x", "2"}).out, "13/4\n");
}

TEST(Cli, EveryFamilyOfSubcommands)
{
    EXPECT_EQ(invoke({"count", "contingency", "--rows", "2,1,1", "--cols", "3,1"}).out, "3\n");
    EXPECT_EQ(invoke({"count", "pseudomagic", "--k", "2", "--l", "3"}).out, "70\n");
    EXPECT_EQ(invoke({"count", "pseudomagic-multi", "--bounds", "1,0"}).out, "2\n");
    EXPECT_EQ(invoke({"count", "sym-even", "--k", "2", "--j", "2"}).out, "2\n");
    EXPECT_EQ(invoke({"count", "sym-even-bounded", "--k", "1", "--l", "4"}).out, "3\n");
    EXPECT_EQ(invoke({"count", "brute", "--family", "pseudomagic", "--k", "2", "--l", "3"}).out, "70\n");
    EXPECT_EQ(invoke({"ehrhart", "volume", "--family", "magic", "--k", "3"}).out, "9/8\n");
    EXPECT_EQ(invoke({"ehrhart", "zeros", "--k", "3"}).out, "true\n");
    EXPECT_EQ(invoke({"ehrhart", "reciprocity", "--k", "4"}).out, "true\n");
    EXPECT_EQ(invoke({"oracle", "contour", "--k", "2", "--l", "1"}).out, "7\n");
    EXPECT_EQ(invoke({"oracle", "expansion", "--alpha", "2,2,1", "--beta", "3,1,1"}).out, "8\n");
    EXPECT_EQ(invoke({"zeta", "pairs", "--k", "1", "--x", "3"}).out, "11/6\n");
    EXPECT_EQ(invoke({"rmt", "exact", "--n", "2", "--k", "1"}).out, "3\n");
    EXPECT_EQ(invoke({"rmt", "gfactor", "--k", "2"}).out, "1/12\n");
}

TEST(Cli, JsonRecords)
{
    const auto r = invoke({"--json", "ehrhart", "hvector", "--family", "magic", "--k", "3"});
    ASSERT_EQ(r.code, 0);
    const Json record = Json::parse(r.out);
    EXPECT_EQ(record["value"], Json::array({"1", "1", "1"}));
    EXPECT_EQ(record["command"], "--json ehrhart hvector --family magic --k 3");

    const Json poly = Json::parse(invoke({"--json", "ehrhart", "poly", "--family", "magic", "--k", "3"}).out);
    EXPECT_EQ(poly["value"], Json::array({"1", "9/4", "15/8", "3/4", "1/8"}));

    const Json euler = Json::parse(invoke({"euler", "a", "--k", "1", "--primes", "1000", "--json"}).out);
    EXPECT_NEAR(euler["value"]["value"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(euler["value"]["prime_limit"], 1000);
}

TEST(Cli, JsonRoundTripIsIdempotent)
{
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"--json", "zeta", "ladder", "--k", "1", "--xs", "10,100", "--primes", "1000"},
             {"--json", "rmt", "moment", "--j", "1", "--k", "1", "--n", "3", "--samples", "200"},
             {"--json", "zeta", "integrate", "--k", "1", "--x", "3", "--t", "100", "--steps", "2000"},
             {"--json", "rmt", "secular", "--n", "3"}}) {
        const std::string text = invoke(args).out;
        const Json parsed = Json::parse(text);
        EXPECT_EQ(parsed.dump() + "\n", text);
        EXPECT_EQ(Json::parse(parsed.dump()).dump(), parsed.dump());
    }
}

TEST(Cli, FloatsCarryAtMostFifteenSignificantDigits)
{
    EXPECT_EQ(pseudomoments::cli::json_float(1.0 / 3.0).dump(), "0.333333333333333");
    EXPECT_TRUE(pseudomoments::cli::json_float(std::numeric_limits<double>::infinity()).is_null());
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"count"}).code, 2);
    EXPECT_EQ(invoke({"count", "magic", "--k", "3"}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"count", "magic", "--k", "3", "--j", "1", "--bogus"}).code, 2);
    EXPECT_EQ(invoke({"count", "magic", "--k", "0", "--j", "1"}).code, 2);
    EXPECT_EQ(invoke({"rmt", "truncated", "--l", "1", "--k", "1", "--n", "4", "--z-re", "2"}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, BudgetErrors)
{
    const auto brute = invoke({"count", "brute", "--family", "magic", "--k", "4", "--j", "9"});
    EXPECT_EQ(brute.code, 3);
    EXPECT_NE(brute.err.find("budget"), std::string::npos);
    EXPECT_EQ(invoke({"--budget", "1000", "zeta", "mv", "--k", "2", "--x", "100"}).code, 3);
    EXPECT_EQ(invoke({"--budget", "10", "oracle", "contour", "--k", "2", "--l", "3"}).code, 3);
    EXPECT_EQ(invoke({"zeta", "pairs", "--k", "3", "--x", "100"}).code, 3);
}

TEST(Cli, OutFileReceivesJson)
{
    const auto path = std::filesystem::temp_directory_path() / "pseudomoments_cli_test.json";
    const auto r = invoke({"--out", path.string(), "count", "magic", "--k", "2", "--j", "4"});
    EXPECT_EQ(r.out, "5\n");
    std::ifstream file(path);
    const Json record = Json::parse(file);
    EXPECT_EQ(record["value"], "5");
    std::filesystem::remove(path);
}

TEST(Cli, ExecutableIsByteReproducible)
{
    const std::string args = "--json --seed 17 --threads 2 rmt truncated --l 2 --k 1 --n 6 --samples 3000";
    const auto first = spawn(args);
    const auto second = spawn(args);
    EXPECT_EQ(first.code, 0);
    EXPECT_FALSE(first.out.empty());
    EXPECT_EQ(first.out, second.out);
    EXPECT_NE(first.out, spawn("--json --seed 18 --threads 2 rmt truncated --l 2 --k 1 --n 6 --samples 3000").out);
    EXPECT_EQ(spawn("count magic --k 3 --j 1").out, "6\n");
    EXPECT_EQ(spawn("count").code, 2);
    EXPECT_EQ(spawn("count brute --family magic --k 4 --j 9").code, 3);
}
