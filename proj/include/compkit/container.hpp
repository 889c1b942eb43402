#pragma once

#include "compkit/argument_spec.hpp"
#include "compkit/build.hpp"
#include "compkit/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace compkit {

/// Fixed in-image directory holding the bundled native wrapper and resources.
inline constexpr std::string_view container_resources_dir = "/opt/compkit";

struct ImageRef {
    std::optional<std::string> registry;
    std::string name;
    std::string tag;

    /// `[registry/]name:tag`
    std::string str() const;
    bool operator==(const ImageRef&) const = default;
};

/// Tag is the component version. Throws GenerateError without a container engine.
ImageRef image_ref(const ComponentConfig& cfg);

/// One `RUN` line per requirement. Throws UnsupportedManager.
std::vector<std::string> setup_commands(const SetupRequirement& req);

std::string generate_containerfile(const ComponentConfig& cfg);

std::string generate_container_wrapper(const ComponentConfig& cfg);

/// Writes `<name>` (container wrapper), `Dockerfile`, and `bundle/` (the
/// native build copied into the image).
BuildArtifact build_container(const ComponentConfig& cfg, const std::filesystem::path& out_dir);

struct Mount {
    std::string host;
    std::string target;
    bool operator==(const Mount&) const = default;
};

struct ContainerRun {
    std::vector<Mount> mounts;
    /// Parameters with file values rewritten to in-container paths.
    ParamMap params;
    /// Full command line, starting with the container runtime.
    std::vector<std::string> argv;
};

/// What the container wrapper executes for already-parsed `params`, with
/// relative file paths taken from `cwd`. Mirrors the wrapper's `---dryrun` output.
ContainerRun plan_container_run(const ComponentConfig& cfg, const ParamMap& params,
                                std::string_view cwd, std::string_view runtime = "docker");

}  // namespace compkit
