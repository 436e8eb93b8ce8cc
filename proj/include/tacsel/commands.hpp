#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace tacsel {

// Shared exit codes: 0 success, 2 config error, 3 runtime/data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

struct CommandOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::string> strategy;  // filter for `run`
    std::optional<uint64_t> seed;         // overrides runs.seed
};

int cmd_generate(const CommandOptions& opts);
int cmd_run(const CommandOptions& opts);
int cmd_sweep_dropout(const CommandOptions& opts);
// opts.config_path doubles as the results directory for `report`.
int cmd_report(const std::string& results_dir, const std::string& out_dir);

}  // namespace tacsel
