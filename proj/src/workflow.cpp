#include "compkit/workflow.hpp"

#include "compkit/errors.hpp"
#include "compkit/util.hpp"
#include "compkit/version.hpp"

#include <algorithm>
#include <regex>

namespace compkit {

namespace fs = std::filesystem;

namespace {

std::string groovy_string(std::string_view text) {
    std::string out = "'";
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\'': out += "\\'"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out + "'";
}

std::string directive_value(const std::string& value) {
    static const std::regex number("[0-9]+(\\.[0-9]+)?");
    return std::regex_match(value, number) ? value : groovy_string(value);
}

constexpr std::string_view helpers = R"GROOVY(
def compkitQuote(value) {
    "'" + value.toString().replace("'", "'\\''") + "'"
}

def compkitFlag(String flag, value) {
    if (value == null) {
        return ''
    }
    if (value instanceof Collection) {
        return value.collect { compkitFlag(flag, it) }.findAll { it }.join(' ')
    }
    return flag + ' ' + compkitQuote(value)
}

def compkitSwitch(String flag, value) {
    return value ? flag : ''
}
)GROOVY";

}  // namespace

std::string workflow_output_name(const ArgumentSpec& arg) {
    std::string ext;
    if (arg.default_value && !arg.default_value->empty()) {
        ext = fs::path(arg.default_value->front()).extension().string();
    }
    return "${id}." + arg.id() + ext;
}

WorkflowModule generate_workflow_module(const ComponentConfig& cfg) {
    const auto* engine = cfg.engine(EngineKind::workflow);
    if (engine == nullptr) {
        throw GenerateError("component '" + cfg.name + "' has no workflow engine");
    }
    WorkflowModule module;
    module.process_name = cfg.name;
    if (cfg.engine(EngineKind::container) != nullptr) {
        module.container_ref = image_ref(cfg);
    }

    std::vector<const ArgumentSpec*> inputs;
    std::vector<const ArgumentSpec*> outputs;
    for (const auto& arg : cfg.arguments) {
        if (arg.type != ArgumentType::file) {
            continue;
        }
        if (arg.id() == "id" || arg.id() == "args" || arg.id() == "cli") {
            throw GenerateError("file argument " + arg.name +
                                " clashes with a process variable (id, args, cli)");
        }
        (arg.direction == Direction::input ? inputs : outputs).push_back(&arg);
    }

    std::string out = "// " + cfg.name + " " + cfg.version + "\n";
    out += "// Generated by " + std::string(tool_name) + " " + std::string(tool_version) +
           ". Do not edit.\n\n";
    out += "nextflow.enable.dsl = 2\n";
    out += helpers;

    out += "\nprocess " + cfg.name + " {\n";
    out += "    tag \"${id}\"\n";
    if (module.container_ref) {
        out += "    container " + groovy_string(module.container_ref->str()) + "\n";
    }
    for (const auto& [key, value] : engine->directives) {
        out += "    " + key + " " + directive_value(value) + "\n";
    }

    out += "\n    input:\n    tuple val(id)";
    for (const auto* arg : inputs) {
        out += ", path(" + arg->id() + ")";
    }
    out += ", val(args)\n";

    out += "\n    output:\n";
    if (outputs.empty()) {
        out += "    val(id)\n";
    } else {
        out += "    tuple val(id)";
        for (const auto* arg : outputs) {
            out += ", path(\"" + workflow_output_name(*arg) + "\")";
        }
        out += "\n";
    }

    out += "\n    script:\n    def cli = [\n";
    for (const auto& arg : cfg.arguments) {
        auto flag = groovy_string(arg.name);
        if (arg.type == ArgumentType::boolean_true) {
            out += "        compkitSwitch(" + flag + ", args[" + groovy_string(arg.id()) + "]),\n";
        } else if (arg.type == ArgumentType::file && arg.direction == Direction::input) {
            out += "        compkitFlag(" + flag + ", " + arg.id() + "),\n";
        } else if (arg.type == ArgumentType::file) {
            out += "        compkitFlag(" + flag + ", \"" + workflow_output_name(arg) + "\"),\n";
        } else {
            out += "        compkitFlag(" + flag + ", args[" + groovy_string(arg.id()) + "]),\n";
        }
    }
    out += "    ].findAll { it }.join(' ')\n";
    std::string executable = module.container_ref
                                 ? std::string(container_resources_dir) + "/" + cfg.name
                                 : "${moduleDir}/" + cfg.name;
    out += "    \"\"\"\n    " + executable + " ${cli}\n    \"\"\"\n";
    out += "}\n";

    out += "\nworkflow " + cfg.name + "_wf {\n";
    out += "    take:\n    input_ch\n\n";
    out += "    main:\n    " + cfg.name + "(input_ch)\n\n";
    out += "    emit:\n    " + cfg.name + ".out\n";
    out += "}\n";

    module.module_text = std::move(out);
    return module;
}

BuildArtifact build_workflow(const ComponentConfig& cfg, const fs::path& out_dir) {
    auto module = generate_workflow_module(cfg);
    auto native = build_native(cfg, out_dir);

    BuildArtifact artifact;
    artifact.engine_kind = EngineKind::workflow;
    artifact.output_dir = out_dir;
    artifact.version = cfg.version;
    artifact.entry_path = out_dir / "main.nf";
    write_file(artifact.entry_path, module.module_text);
    artifact.aux_files = native.aux_files;
    artifact.aux_files.emplace_back(cfg.name);
    std::sort(artifact.aux_files.begin(), artifact.aux_files.end());
    return artifact;
}

}  // namespace compkit
