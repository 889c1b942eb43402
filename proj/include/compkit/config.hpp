#pragma once

#include "compkit/argument_spec.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace compkit {

enum class Language { bash, python, r, javascript };

std::string_view to_string(Language language);
std::optional<Language> language_from_string(std::string_view text);
/// File extension without the dot: sh, py, R, js.
std::string_view script_extension(Language language);
/// Interpreter looked up on PATH: bash, python3, Rscript, node.
std::string_view runtime_executable(Language language);

enum class ResourceKind { script, plain_file };

std::string_view to_string(ResourceKind kind);

struct Resource {
    ResourceKind kind = ResourceKind::plain_file;
    std::optional<Language> language;
    std::optional<std::string> path;
    std::optional<std::string> text;
    std::optional<std::string> dest;

    /// Explicit dest, else basename of path, else `main.<ext>`.
    std::string destination() const;

    bool operator==(const Resource&) const = default;
};

enum class EngineKind { native, container, workflow };

std::string_view to_string(EngineKind kind);
std::optional<EngineKind> engine_kind_from_string(std::string_view text);

struct SetupRequirement {
    std::string manager;
    std::vector<std::string> packages;

    bool operator==(const SetupRequirement&) const = default;
};

struct EngineSpec {
    EngineKind kind = EngineKind::native;
    std::string image;
    std::optional<std::string> registry;
    std::vector<SetupRequirement> setup;
    std::map<std::string, std::string> directives;

    bool operator==(const EngineSpec&) const = default;
};

struct ComponentConfig {
    std::string name;
    std::optional<std::string> namespace_path;
    std::string version = "dev";
    std::string description;
    std::vector<ArgumentSpec> arguments;
    std::vector<Resource> resources;
    std::vector<Resource> test_resources;
    std::vector<EngineSpec> engines;
    std::filesystem::path config_path;
    /// Non-fatal notes from parsing (unknown keys).
    std::vector<std::string> warnings;

    const Resource& main_script() const { return resources.front(); }
    const EngineSpec* engine(EngineKind kind) const;
    const ArgumentSpec* argument(std::string_view flag) const;

    /// Equality ignores `config_path` and `warnings`.
    bool same_definition(const ComponentConfig& other) const;
};

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity = Severity::error;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Parses a component config. Relative resource paths are later resolved
/// against `source_path.parent_path()`.
ComponentConfig parse_config(std::string_view yaml_text, const std::filesystem::path& source_path);
ComponentConfig load_config(const std::filesystem::path& path);

std::vector<Diagnostic> validate_config(const ComponentConfig& cfg);

/// Normalized YAML with every default spelled out.
std::string view_config(const ComponentConfig& cfg);

struct ResolvedResource {
    std::variant<std::filesystem::path, std::string> source;
    std::filesystem::path dest;
    bool is_main = false;
};

std::vector<ResolvedResource> resolve_resources(const ComponentConfig& cfg);
/// Same rules applied to `test_resources`.
std::vector<ResolvedResource> resolve_test_resources(const ComponentConfig& cfg);

/// Throws ParseError carrying every error diagnostic when the config is not buildable.
void require_valid(const ComponentConfig& cfg);

}  // namespace compkit
