#pragma once

#include <exception>
#include <string>
#include <vector>

#include "mbump/config.hpp"

namespace mbump {

const std::vector<std::string>& subcommands();

/// Runs one pipeline stage and writes summary.json, CSV tables and, when an
/// invariant fails or an error is raised, failure.json into out_dir.
/// Returns 0 iff every asserted invariant holds, 1 on a violated invariant
/// and 2 on an error.
int run(const std::string& subcommand, const RunConfig& config, const std::string& out_dir);

/// Writes failure.json for an error raised before a stage could start.
int report_error(const std::string& subcommand, const std::string& out_dir, const std::exception& error);

}  // namespace mbump
