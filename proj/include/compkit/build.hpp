#pragma once

#include "compkit/config.hpp"
#include "compkit/injection.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace compkit {

struct BuildArtifact {
    EngineKind engine_kind = EngineKind::native;
    std::filesystem::path output_dir;
    /// The executable (native, container) or module file (workflow).
    std::filesystem::path entry_path;
    /// Every other emitted file, relative to `output_dir`, sorted.
    std::vector<std::filesystem::path> aux_files;
    std::string version;
};

// Native target -------------------------------------------------------------

/// POSIX-shell (bash) wrapper: validated CLI, injection, runtime dispatch.
std::string generate_native_wrapper(const ComponentConfig& cfg);

/// Writes `<out_dir>/<name>` plus every resource. Idempotent.
BuildArtifact build_native(const ComponentConfig& cfg, const std::filesystem::path& out_dir);

/// The meta map a native wrapper installed in `resources_dir` injects.
MetaMap native_meta(const ComponentConfig& cfg, const std::string& resources_dir);

/// Builds `cfg` for `engine` into `out_dir`. Validates first.
BuildArtifact build_component(const ComponentConfig& cfg, EngineKind engine,
                              const std::filesystem::path& out_dir);

}  // namespace compkit
