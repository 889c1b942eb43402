#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace compkit {

std::string read_file(const std::filesystem::path& path);

/// Writes `content` to `path`, creating parent directories. Leaves the file
/// untouched when it already holds exactly `content`.
void write_file(const std::filesystem::path& path, std::string_view content, bool executable = false);

/// Single-quoted POSIX shell word; safe for any byte string without NUL.
std::string shell_quote(std::string_view text);

std::vector<std::string> split(std::string_view text, std::string_view sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// ASCII-only lowercase.
std::string ascii_lower(std::string_view text);

/// Lexically normalized absolute path; relative inputs are taken from `cwd`.
std::string absolute_lexical(std::string_view path, std::string_view cwd);

/// Looks `program` up on PATH (or returns it unchanged when it contains '/').
std::filesystem::path find_executable(std::string_view program);

/// Structural digest over the relative path, mode bit, and content of every
/// regular file below `root`, in sorted order. Equal digests mean identical trees.
std::string directory_digest(const std::filesystem::path& root);

/// Unique fresh directory under the system temp dir.
std::filesystem::path make_temp_dir(std::string_view prefix);

/// True when COMPKIT_DEBUG is set to a non-empty value other than "0".
bool debug_enabled();

}  // namespace compkit
