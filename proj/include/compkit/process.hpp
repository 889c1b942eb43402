#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace compkit {

struct ProcessOptions {
    std::optional<std::filesystem::path> cwd;
    /// Overrides applied on top of the inherited environment.
    std::map<std::string, std::string> env;
    std::string stdin_text;
    /// Merge stderr into stdout (single interleaved capture).
    bool merge_stderr = false;
};

struct ProcessResult {
    /// Exit status, or 128 + signal when killed.
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Runs `argv[0]` (looked up on PATH) and waits, capturing both streams.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options = {});

/// Runs with inherited stdio and returns the exit code (128 + signal when killed).
int run_foreground(const std::vector<std::string>& argv);

}  // namespace compkit
