#include "compkit/build.hpp"

#include "compkit/container.hpp"
#include "compkit/errors.hpp"
#include "compkit/workflow.hpp"

namespace compkit {

BuildArtifact build_component(const ComponentConfig& cfg, EngineKind engine,
                              const std::filesystem::path& out_dir) {
    require_valid(cfg);
    if (engine != EngineKind::native && cfg.engine(engine) == nullptr) {
        throw BuildError("component '" + cfg.name + "' has no " + std::string(to_string(engine)) +
                         " engine");
    }
    switch (engine) {
        case EngineKind::native: return build_native(cfg, out_dir);
        case EngineKind::container: return build_container(cfg, out_dir);
        case EngineKind::workflow: return build_workflow(cfg, out_dir);
    }
    throw BuildError("unknown engine");
}

}  // namespace compkit
