#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "alfven/csv.hpp"
#include "alfven_cli/config.hpp"

namespace alfven::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct CommandResult {
    std::string command;
    int exit_code = kExitPass;
    nlohmann::ordered_json summary;
    std::vector<std::pair<std::string, csv::Table>> tables;  // file stem, data
    std::string text;     // human-readable report for stdout
    std::string message;  // failure reason for stderr
};

CommandResult cmd_check(const RunConfig& cfg);
CommandResult cmd_homog(const RunConfig& cfg);
CommandResult cmd_wronskian(const RunConfig& cfg);
CommandResult cmd_theta(const RunConfig& cfg);
CommandResult cmd_island(const RunConfig& cfg);
CommandResult cmd_evolve(const RunConfig& cfg);
CommandResult cmd_compare(const RunConfig& cfg);

// Dispatch by name; throws UsageError for an unknown command.
CommandResult run_command(const std::string& name, const RunConfig& cfg);

// Writes the result. With cfg.out set: CSV tables plus summary.json, or one <command>.json.
// Without: the text report, else the first table or the JSON document, on `out`.
void emit(const CommandResult& r, const RunConfig& cfg, std::ostream& out);

// Full command line: alfven <command> --config PATH [flags]. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alfven::cli
