#pragma once

#include "compkit/argument_spec.hpp"
#include "compkit/config.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace compkit {

/// Converts one CLI token. Integers are signed decimal within int64;
/// doubles accept decimal and scientific notation; booleans accept
/// true/false/yes/no/1/0 in any ASCII case. Throws CoerceError.
Scalar coerce(ArgumentType type, std::string_view raw);

struct ParseOutcome {
    enum class Kind { params, help, version };

    Kind kind = Kind::params;
    ParamMap params;
    /// Messages (without the `warning: ` prefix) for repeated single-valued flags.
    std::vector<std::string> warnings;
};

/// Parses `argv` (program name excluded). Throws UsageError; coercion
/// failures are reported as UsageError naming the argument.
ParseOutcome parse_args(std::span<const ArgumentSpec> specs, std::span<const std::string> argv);

struct FileError {
    std::string argument;
    std::string path;

    std::string message() const;
    bool operator==(const FileError&) const = default;
};

/// Existence check for `must_exist` input files. Relative paths are
/// resolved against the current directory.
std::vector<FileError> check_files(std::span<const ArgumentSpec> specs, const ParamMap& params);

std::string render_help(const ComponentConfig& cfg);

/// `<name> <version>`, as printed by `--version`.
std::string version_line(const ComponentConfig& cfg);

/// Canonical text of a scalar as it appears in generated code and argv.
std::string scalar_text(const Scalar& value);

}  // namespace compkit
