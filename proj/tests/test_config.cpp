#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "projens/commands.hpp"
#include "projens/config.hpp"

using namespace projens;

namespace
{
    RunConfig sample()
    {
        return RunConfig({{"alpha", "1", "first key"}, {"list", "1, 2,3", ""}, {"flag", "false", ""}});
    }
}

TEST(Config, DefaultsAndOverrides)
{
    auto cfg = sample();
    EXPECT_EQ(cfg.get_size("alpha"), 1u);
    EXPECT_EQ(cfg.get_size_list("list"), (std::vector<std::size_t>{1, 2, 3}));
    const std::vector<std::string> args{"--alpha", "7", "--flag=true"};
    cfg.apply_overrides(args);
    EXPECT_EQ(cfg.get_size("alpha"), 7u);
    EXPECT_TRUE(cfg.get_bool("flag"));
    EXPECT_EQ(cfg.snapshot(), "# first key\nalpha = 7\nlist = 1, 2,3\nflag = true\n");
}

TEST(Config, FileThenCommandLine)
{
    const auto path = std::filesystem::temp_directory_path() / "projens_config_test.txt";
    std::ofstream(path) << "# comment\nalpha = 3   # trailing\n\nflag = yes\n";
    auto cfg = sample();
    const std::vector<std::string> args{"--config", path.string(), "--alpha", "4"};
    cfg.apply_overrides(args);
    EXPECT_EQ(cfg.get_size("alpha"), 4u);
    EXPECT_TRUE(cfg.get_bool("flag"));
    std::filesystem::remove(path);
}

TEST(Config, Errors)
{
    auto cfg = sample();
    EXPECT_THROW(cfg.set("beta", "1"), ConfigError);
    EXPECT_THROW(cfg.parse_text("alpha 3"), ConfigError);
    EXPECT_THROW(cfg.parse_text("gamma = 3"), ConfigError);
    const std::vector<std::string> dangling{"--alpha"};
    EXPECT_THROW(cfg.apply_overrides(dangling), ConfigError);
    const std::vector<std::string> bare{"alpha"};
    EXPECT_THROW(cfg.apply_overrides(bare), ConfigError);
    const std::vector<std::string> missing{"--config", "/nonexistent/projens.cfg"};
    EXPECT_THROW(cfg.apply_overrides(missing), ConfigError);
    cfg.set("alpha", "-1");
    EXPECT_THROW(cfg.get_size("alpha"), ConfigError);
    cfg.set("alpha", "1.5x");
    EXPECT_THROW(cfg.get_double("alpha"), ConfigError);
    cfg.set("alpha", "nan");
    EXPECT_THROW(cfg.get_double("alpha"), ConfigError);
    cfg.set("flag", "maybe");
    EXPECT_THROW(cfg.get_bool("flag"), ConfigError);
    cfg.set("list", "1,,2");
    EXPECT_THROW(cfg.get_list("list"), ConfigError);
    cfg.set("list", "");
    EXPECT_TRUE(cfg.get_list("list").empty());
}

TEST(Config, AgentKeysMapToConfig)
{
    auto cfg = deepsea_config();
    const std::vector<std::string> args{"--hidden", "32,16", "--n_atoms", "11", "--variants", "ind",
                                        "--episodes", "90", "--beta_horizon", "0"};
    cfg.apply_overrides(args);
    const auto a = agent_config_from(cfg);
    EXPECT_EQ(a.hidden, (std::vector<std::size_t>{32, 16}));
    EXPECT_EQ(a.n_atoms, 11u);
    EXPECT_EQ(a.total_episodes, 90u);
    cfg.set("beta_horizon", "10000");
    EXPECT_EQ(agent_config_from(cfg).total_episodes, 10000u);
    cfg.set("gamma", "1.5");
    EXPECT_THROW(agent_config_from(cfg), ConfigError);
}

TEST(Config, SchemasResolve)
{
    for (const auto &cfg : {audit_config(), deepsea_config(), toyreg_config()}) {
        for (const auto &key : cfg.schema()) {
            EXPECT_FALSE(key.name.empty());
            EXPECT_TRUE(cfg.has_key(key.name));
        }
        EXPECT_TRUE(cfg.has_key("seed"));
        EXPECT_TRUE(cfg.has_key("out"));
    }
}
