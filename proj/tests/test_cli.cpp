#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "projens/commands.hpp"

using namespace projens;
namespace fs = std::filesystem;

namespace
{
    struct Run
    {
        int code;
        std::string out;
        std::string err;
    };

    Run cli(std::vector<std::string> args)
    {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return {code, out.str(), err.str()};
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path scratch(const std::string &name)
    {
        const auto dir = fs::temp_directory_path() / ("projens_cli_" + name);
        fs::remove_all(dir);
        return dir;
    }

    std::vector<std::string> tiny_deepsea(const fs::path &out)
    {
        return {"deepsea",      "--out",        out.string(), "--sizes",    "3",        "--seeds",
                "0,1",          "--episodes",   "4",          "--hidden",   "8",        "--n_atoms",
                "5",            "--batch_size", "4",          "--variants", "diverse,ind"};
    }
}

TEST(Cli, UsageAndExitCodes)
{
    EXPECT_EQ(cli({}).code, kExitConfigError);
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
    const auto v = cli({"--version"});
    EXPECT_EQ(v.code, kExitOk);
    EXPECT_EQ(v.out, std::string(version_string()) + "\n");
    EXPECT_EQ(cli({"train"}).code, kExitConfigError);
    EXPECT_EQ(cli({"audit", "--no_such_key", "1"}).code, kExitConfigError);
    EXPECT_EQ(cli({"audit", "--trials", "0", "--out", scratch("zero").string()}).code, kExitConfigError);
    EXPECT_EQ(cli({"deepsea", "--variants", "other", "--out", scratch("var").string()}).code, kExitConfigError);
    EXPECT_EQ(cli({"toyreg", "--out", ""}).code, kExitConfigError);
    const auto help = cli({"toyreg", "--help"});
    EXPECT_EQ(help.code, kExitOk);
    EXPECT_NE(help.out.find("n_points = 256"), std::string::npos);
}

TEST(Cli, AuditWritesReports)
{
    const auto dir = scratch("audit");
    const auto r = cli({"audit", "--out", dir.string(), "--trials", "3", "--pairs", "2", "--optimism_pairs", "200",
                        "--propagation_mdps", "2", "--residual_mdps", "1", "--residual_k", "11,21",
                        "--reference_resolution", "201", "--dump_cells", "true"});
    EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
    for (const char *f : {"contraction.csv", "propagation.csv", "residual.csv", "cells.csv", "audits.json",
                          "config.txt", "VERSION"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    EXPECT_NE(slurp(dir / "audits.json").find("\"all_pass\": true"), std::string::npos);
    EXPECT_NE(slurp(dir / "config.txt").find("trials = 3"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, DeepSeaOutputsAndDeterminism)
{
    const auto a = scratch("ds_a");
    const auto b = scratch("ds_b");
    ASSERT_EQ(cli(tiny_deepsea(a)).code, kExitOk);
    auto args = tiny_deepsea(b);
    args.insert(args.end(), {"--jobs", "2"});
    ASSERT_EQ(cli(args).code, kExitOk);
    for (const char *f : {"regret.csv", "episodes_N3_diverse.csv", "episodes_N3_ind.csv"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    const auto regret = slurp(a / "regret.csv");
    EXPECT_EQ(std::count(regret.begin(), regret.end(), '\n'), 5);
    const auto episodes = slurp(a / "episodes_N3_diverse.csv");
    // 2 seeds x 4 episodes x (train + eval) + header
    EXPECT_EQ(std::count(episodes.begin(), episodes.end(), '\n'), 17);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cli, ZeroBudgetWritesHeaderOnly)
{
    const auto dir = scratch("ds_zero");
    auto args = tiny_deepsea(dir);
    args.insert(args.end(), {"--episodes", "0"});
    ASSERT_EQ(cli(args).code, kExitOk);
    EXPECT_EQ(slurp(dir / "regret.csv"), "size,seed,variant,episodes_to_solve,total_regret\n");
    fs::remove_all(dir);
}

TEST(Cli, ToyRegression)
{
    const auto dir = scratch("toy");
    const auto r = cli({"toyreg", "--out", dir.string(), "--steps", "50", "--n_points", "32", "--grid_points", "5"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = slurp(dir / "toyreg.csv");
    EXPECT_EQ(rows.rfind("head,x,tau,value\n", 0), 0u);
    // two heads x 5 grid points x 9 levels + header
    EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 91);
    fs::remove_all(dir);
}

TEST(Cli, BinaryExitStatus)
{
    const std::string bin = PROJENS_CLI_PATH;
    auto status = [&](const std::string &tail) {
        const int raw = std::system((bin + " " + tail + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("--version"), 0);
    EXPECT_EQ(status(""), 2);
    EXPECT_EQ(status("audit --bogus 1"), 2);
}
