#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "projens/agent.hpp"
#include "projens/config.hpp"

namespace projens
{
    enum ExitCode : int
    {
        kExitOk = 0,
        kExitAuditFailure = 1,
        kExitConfigError = 2,
    };

    /// Version string compiled into the library.
    const char *version_string();

    RunConfig audit_config();
    RunConfig deepsea_config();
    RunConfig toyreg_config();

    /// Builds an agent config from the agent keys shared by deepsea runs.
    PeDqnConfig agent_config_from(const RunConfig &cfg);

    /// Each command writes `config.txt` (resolved snapshot) and `VERSION` into
    /// the `out` directory next to its results. Throws ConfigError on bad
    /// settings; progress goes to `log`.
    int cmd_audit(const RunConfig &cfg, std::ostream &log);
    int cmd_deepsea(const RunConfig &cfg, std::ostream &log);
    int cmd_toyreg(const RunConfig &cfg, std::ostream &log);

    /// `projens <audit|deepsea|toyreg> [--config file] [--key value ...]`.
    int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err);
}
