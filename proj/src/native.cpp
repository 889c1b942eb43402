#include "compkit/build.hpp"

#include "compkit/errors.hpp"
#include "compkit/util.hpp"
#include "shell_wrapper.hpp"

#include <algorithm>

namespace compkit {

namespace fs = std::filesystem;

MetaMap native_meta(const ComponentConfig& cfg, const std::string& resources_dir) {
    return {
        {"name", cfg.name},
        {"version", cfg.version},
        {"resources_dir", resources_dir},
        {"executable", resources_dir + "/" + cfg.name},
    };
}

std::string generate_native_wrapper(const ComponentConfig& cfg) {
    if (cfg.resources.empty() || cfg.main_script().kind != ResourceKind::script ||
        !cfg.main_script().language) {
        throw GenerateError("component '" + cfg.name + "' has no main script with a supported language");
    }
    const auto& main = cfg.main_script();
    auto language = *main.language;
    auto runtime = std::string(runtime_executable(language));
    std::string script_text = main.text ? *main.text : std::string{};
    if (main.path) {
        auto source = fs::path(*main.path);
        if (source.is_relative()) {
            source = cfg.config_path.parent_path() / source;
        }
        try {
            script_text = read_file(source);
        } catch (const Error&) {
            throw ResourceError({"missing resource " + source.lexically_normal().string()});
        }
    }
    auto parts = split_for_injection(script_text, language);
    auto script_name = fs::path(main.destination()).filename().string();

    std::string out = detail::wrapper_prelude(cfg);
    out += "\n";
    out += detail::wrapper_parser(cfg);
    out += detail::wrapper_serializer(cfg, language);
    out += "\n";
    out += detail::wrapper_locate_self(cfg);
    out += R"BASH(
_ck_parse "$@"
_ck_finish

)BASH";
    out += "if ! command -v " + runtime + " >/dev/null 2>&1; then\n";
    out += "    printf 'error: %s\\n' " + shell_quote("runtime '" + runtime + "' not found on PATH") +
           " >&2\n";
    out += "    exit 127\n";
    out += "fi\n";
    out += R"BASH(
_ck_render_block
_ck_tmp=$(mktemp -d "${TMPDIR:-/tmp}/compkit-$_ck_name-XXXXXX") || _ck_die 'cannot create a temporary directory'
if [[ -n ${COMPKIT_DEBUG:-} && $COMPKIT_DEBUG != 0 ]]; then
    printf 'compkit: keeping %s\n' "$_ck_tmp" >&2
else
    trap 'rm -rf -- "$_ck_tmp"' EXIT
fi
)BASH";
    out += "_ck_script=$_ck_tmp/" + shell_quote(script_name) + "\n";
    out += "{\n";
    out += "    printf '%s' " + shell_quote(parts.head) + "\n";
    out += "    printf '%s' \"$_ck_buf\"\n";
    out += "    printf '%s' " + shell_quote(parts.tail) + "\n";
    out += "} > \"$_ck_script\" || _ck_die 'cannot write the injected script'\n";
    out += runtime + " \"$_ck_script\"\n";
    out += "exit $?\n";
    return out;
}

namespace {

std::vector<fs::path> write_resources(const ComponentConfig& cfg, const fs::path& out_dir) {
    std::vector<fs::path> written;
    for (const auto& res : resolve_resources(cfg)) {
        auto target = out_dir / res.dest;
        if (const auto* source = std::get_if<fs::path>(&res.source)) {
            auto perms = fs::status(*source).permissions();
            bool exec = (perms & fs::perms::owner_exec) != fs::perms::none;
            write_file(target, read_file(*source), exec || res.is_main);
        } else {
            write_file(target, std::get<std::string>(res.source), res.is_main);
        }
        written.push_back(res.dest);
    }
    return written;
}

}  // namespace

BuildArtifact build_native(const ComponentConfig& cfg, const fs::path& out_dir) {
    auto resources = resolve_resources(cfg);
    for (const auto& res : resources) {
        if (res.dest == fs::path(cfg.name)) {
            throw ResourceError({"resource destination '" + res.dest.string() +
                                 "' collides with the executable name"});
        }
    }
    auto wrapper = generate_native_wrapper(cfg);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw BuildError("cannot create " + out_dir.string() + ": " + ec.message());
    }

    BuildArtifact artifact;
    artifact.engine_kind = EngineKind::native;
    artifact.output_dir = out_dir;
    artifact.version = cfg.version;
    artifact.aux_files = write_resources(cfg, out_dir);
    artifact.entry_path = out_dir / cfg.name;
    write_file(artifact.entry_path, wrapper, true);
    std::sort(artifact.aux_files.begin(), artifact.aux_files.end());
    return artifact;
}

}  // namespace compkit
