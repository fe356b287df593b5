#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

struct ToolMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string stdout_text;
    std::string stderr_text;
};

/// Run `argv` with the given working directory, capture both streams,
/// kill the process group on timeout. Throws ToolMissing when the
/// executable cannot be spawned.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::chrono::milliseconds timeout,
                          const std::string& working_dir = "");

/// Resolve `name` against PATH; empty result when not found.
std::string find_executable(const std::string& name);

}  // namespace forge
