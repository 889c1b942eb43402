#pragma once

#include "compkit/build.hpp"
#include "compkit/config.hpp"
#include "compkit/container.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace compkit {

struct WorkflowModule {
    std::string module_text;
    std::string process_name;
    std::optional<ImageRef> container_ref;
};

/// DSL2 module: one process named after the component plus a `<name>_wf`
/// workflow. Throws GenerateError without a workflow engine.
WorkflowModule generate_workflow_module(const ComponentConfig& cfg);

/// File name an output-direction argument receives inside the process.
std::string workflow_output_name(const ArgumentSpec& arg);

/// Writes `main.nf` next to a native build of the component.
BuildArtifact build_workflow(const ComponentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace compkit
