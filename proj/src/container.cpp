#include "compkit/container.hpp"

#include "compkit/arguments.hpp"
#include "compkit/errors.hpp"
#include "compkit/util.hpp"
#include "shell_wrapper.hpp"

#include <algorithm>
#include <set>

namespace compkit {

namespace fs = std::filesystem;

std::string ImageRef::str() const {
    std::string out;
    if (registry && !registry->empty()) {
        out = *registry;
        if (out.back() != '/') {
            out += '/';
        }
    }
    return out + name + ":" + tag;
}

namespace {

const EngineSpec& container_engine(const ComponentConfig& cfg) {
    const auto* engine = cfg.engine(EngineKind::container);
    if (engine == nullptr) {
        throw GenerateError("component '" + cfg.name + "' has no container engine");
    }
    return *engine;
}

std::string package_list(const std::vector<std::string>& packages) { return join(packages, " "); }

std::string r_vector(const std::vector<std::string>& packages) {
    std::string out = "c(";
    for (std::size_t i = 0; i < packages.size(); ++i) {
        out += (i > 0 ? ", \"" : "\"") + packages[i] + "\"";
    }
    return out + ")";
}

}  // namespace

ImageRef image_ref(const ComponentConfig& cfg) {
    const auto& engine = container_engine(cfg);
    return ImageRef{engine.registry, cfg.name, cfg.version};
}

std::vector<std::string> setup_commands(const SetupRequirement& req) {
    const auto pkgs = package_list(req.packages);
    if (req.manager == "apt") {
        return {"RUN apt-get update && DEBIAN_FRONTEND=noninteractive apt-get install -y "
                "--no-install-recommends " +
                pkgs + " && rm -rf /var/lib/apt/lists/*"};
    }
    if (req.manager == "apk") {
        return {"RUN apk add --no-cache " + pkgs};
    }
    if (req.manager == "yum") {
        return {"RUN yum install -y " + pkgs + " && yum clean all && rm -rf /var/cache/yum"};
    }
    if (req.manager == "pip") {
        return {"RUN pip install --no-cache-dir " + pkgs};
    }
    if (req.manager == "r") {
        // owner/repo entries come from GitHub, the rest from CRAN.
        std::vector<std::string> cran;
        std::vector<std::string> github;
        for (const auto& p : req.packages) {
            (p.find('/') != std::string::npos ? github : cran).push_back(p);
        }
        std::string line =
            "RUN Rscript -e 'if (!requireNamespace(\"remotes\", quietly = TRUE)) "
            "install.packages(\"remotes\", repos = \"https://cloud.r-project.org\")'";
        if (!cran.empty()) {
            line += " -e 'remotes::install_cran(" + r_vector(cran) +
                    ", repos = \"https://cloud.r-project.org\")'";
        }
        if (!github.empty()) {
            line += " -e 'remotes::install_github(" + r_vector(github) + ")'";
        }
        line += " && rm -rf /tmp/downloaded_packages /tmp/Rtmp*";
        return {line};
    }
    throw UnsupportedManager(req.manager);
}

std::string generate_containerfile(const ComponentConfig& cfg) {
    const auto& engine = container_engine(cfg);
    std::string out = "FROM " + engine.image + "\n";
    for (const auto& req : engine.setup) {
        for (const auto& line : setup_commands(req)) {
            out += line + "\n";
        }
    }
    out += "LABEL compkit.name=\"" + cfg.name + "\" compkit.version=\"" + cfg.version + "\"\n";
    out += "COPY bundle/ " + std::string(container_resources_dir) + "/\n";
    out += "ENTRYPOINT [\"" + std::string(container_resources_dir) + "/" + cfg.name + "\"]\n";
    return out;
}

namespace {

constexpr std::string_view container_helpers = R"BASH(
_ck_runtime=${COMPKIT_CONTAINER_CLI:-docker}
_ck_dryrun=0
_ck_meta=
_ck_setup_mode=build
_ck_args=()

# Meta-commands start with three dashes and may appear anywhere.
_ck_scan_meta() {
    while (( $# > 0 )); do
        case $1 in
            ---dryrun) _ck_dryrun=1 ;;
            ---dockerfile|---image)
                [[ -n $_ck_meta ]] || _ck_meta=${1#---} ;;
            ---setup)
                [[ -n $_ck_meta ]] || _ck_meta=setup
                if (( $# > 1 )) && [[ $2 == build || $2 == pull || $2 == push ]]; then
                    _ck_setup_mode=$2
                    shift
                fi ;;
            ---*) _ck_die "unknown meta-command $1" ;;
            *) _ck_args+=("$1") ;;
        esac
        shift
    done
}

# Runs the command, or prints it shell-quoted under ---dryrun.
_ck_invoke() {
    if (( _ck_dryrun )); then
        local w line= sep=
        for w in "$@"; do
            _ck_str_sh "$w"
            line+="$sep$_ck_lit"
            sep=' '
        done
        printf '%s\n' "$line"
        exit 0
    fi
    command -v -- "$1" >/dev/null 2>&1 || _ck_die "container runtime '$1' not found on PATH"
    "$@"
    exit $?
}

# Lexically normalized absolute path -> _ck_lit
_ck_abspath() {
    local rest=$1 seg out=
    local -a kept=()
    [[ $rest == /* ]] || rest=$_ck_cwd/$rest
    rest+=/
    while [[ -n $rest ]]; do
        seg=${rest%%/*}
        rest=${rest#*/}
        case $seg in
            ''|.) ;;
            ..) (( ${#kept[@]} == 0 )) || kept=("${kept[@]:0:${#kept[@]}-1}") ;;
            *) kept+=("$seg") ;;
        esac
    done
    for seg in "${kept[@]}"; do
        out+=/$seg
    done
    _ck_lit=${out:-/}
}

_ck_parent() {
    _ck_abspath "$1"
    _ck_base=${_ck_lit##*/}
    _ck_dir=${_ck_lit%/*}
    _ck_dir=${_ck_dir:-/}
}

# Inserts a host directory into the sorted, duplicate-free _ck_mount_src.
_ck_add_mount() {
    local LC_ALL=C dir=$1 i inserted=0
    local -a sorted=()
    for (( i = 0; i < ${#_ck_mount_src[@]}; i++ )); do
        [[ ${_ck_mount_src[i]} == "$dir" ]] && return 0
    done
    for (( i = 0; i < ${#_ck_mount_src[@]}; i++ )); do
        if (( ! inserted )) && [[ $dir < ${_ck_mount_src[i]} ]]; then
            sorted+=("$dir")
            inserted=1
        fi
        sorted+=("${_ck_mount_src[i]}")
    done
    (( inserted )) || sorted+=("$dir")
    _ck_mount_src=("${sorted[@]}")
}

# In-container path for a host file -> _ck_lit
_ck_rewrite() {
    local i
    _ck_parent "$1"
    for (( i = 0; i < ${#_ck_mount_src[@]}; i++ )); do
        if [[ ${_ck_mount_src[i]} == "$_ck_dir" ]]; then
            _ck_lit=/mnt/v$i/$_ck_base
            return 0
        fi
    done
}
)BASH";

}  // namespace

std::string generate_container_wrapper(const ComponentConfig& cfg) {
    auto ref = image_ref(cfg);
    auto recipe = generate_containerfile(cfg);
    const auto& args = cfg.arguments;

    std::string out = detail::wrapper_prelude(cfg);
    out += "\n";
    out += detail::wrapper_parser(cfg);
    out += container_helpers;
    out += "\n_ck_image=" + shell_quote(ref.str()) + "\n";
    out += "\n_ck_dockerfile() {\n    printf '%s' " + shell_quote(recipe) + "\n}\n\n";
    out += detail::wrapper_locate_self(cfg);
    out += R"BASH(
_ck_scan_meta "$@"
case $_ck_meta in
    dockerfile)
        _ck_dockerfile
        exit 0 ;;
    image)
        printf '%s\n' "$_ck_image"
        exit 0 ;;
    setup)
        case $_ck_setup_mode in
            pull) _ck_invoke "$_ck_runtime" pull "$_ck_image" ;;
            push) _ck_invoke "$_ck_runtime" push "$_ck_image" ;;
            *)
                _ck_dockerfile | _ck_invoke "$_ck_runtime" build -t "$_ck_image" -f - "$_ck_resources_dir"
                exit $? ;;
        esac ;;
esac

_ck_parse "${_ck_args[@]}"
_ck_finish

_ck_cwd=$(pwd -P)
_ck_mount_src=()
)BASH";

    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].type != ArgumentType::file) {
            continue;
        }
        auto n = std::to_string(i);
        out += "if (( _ck_seen_" + n + " )); then\n";
        out += "    for _ck_piece in \"${_ck_val_" + n + "[@]}\"; do\n";
        out += "        _ck_parent \"$_ck_piece\"\n";
        out += "        _ck_add_mount \"$_ck_dir\"\n";
        out += "    done\n";
        out += "fi\n";
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].type != ArgumentType::file) {
            continue;
        }
        auto n = std::to_string(i);
        out += "if (( _ck_seen_" + n + " )); then\n";
        out += "    _ck_rewritten=()\n";
        out += "    for _ck_piece in \"${_ck_val_" + n + "[@]}\"; do\n";
        out += "        _ck_rewrite \"$_ck_piece\"\n";
        out += "        _ck_rewritten+=(\"$_ck_lit\")\n";
        out += "    done\n";
        out += "    _ck_val_" + n + "=(\"${_ck_rewritten[@]}\")\n";
        out += "fi\n";
    }

    out += R"BASH(
_ck_cmd=("$_ck_runtime" run --rm -i)
for (( _ck_i = 0; _ck_i < ${#_ck_mount_src[@]}; _ck_i++ )); do
    _ck_cmd+=(-v "${_ck_mount_src[_ck_i]}:/mnt/v$_ck_i")
done
_ck_cmd+=("$_ck_image")
)BASH";
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& arg = args[i];
        auto n = std::to_string(i);
        out += "if (( _ck_seen_" + n + " )); then\n";
        if (arg.type == ArgumentType::boolean_true) {
            out += "    [[ ${_ck_val_" + n + "[0]} == true ]] && _ck_cmd+=(" + shell_quote(arg.name) + ")\n";
        } else {
            out += "    for _ck_piece in \"${_ck_val_" + n + "[@]}\"; do\n";
            out += "        _ck_cmd+=(" + shell_quote(arg.name) + " \"$_ck_piece\")\n";
            out += "    done\n";
        }
        out += "fi\n";
    }
    out += "_ck_invoke \"${_ck_cmd[@]}\"\n";
    return out;
}

BuildArtifact build_container(const ComponentConfig& cfg, const fs::path& out_dir) {
    auto wrapper = generate_container_wrapper(cfg);
    auto recipe = generate_containerfile(cfg);
    auto bundle = build_native(cfg, out_dir / "bundle");

    BuildArtifact artifact;
    artifact.engine_kind = EngineKind::container;
    artifact.output_dir = out_dir;
    artifact.version = cfg.version;
    artifact.entry_path = out_dir / cfg.name;
    write_file(out_dir / "Dockerfile", recipe);
    write_file(artifact.entry_path, wrapper, true);
    artifact.aux_files.emplace_back("Dockerfile");
    artifact.aux_files.push_back(fs::path("bundle") / cfg.name);
    for (const auto& f : bundle.aux_files) {
        artifact.aux_files.push_back(fs::path("bundle") / f);
    }
    std::sort(artifact.aux_files.begin(), artifact.aux_files.end());
    return artifact;
}

ContainerRun plan_container_run(const ComponentConfig& cfg, const ParamMap& params,
                                std::string_view cwd, std::string_view runtime) {
    ContainerRun run;
    auto split_path = [&](const std::string& value) {
        auto abs = absolute_lexical(value, cwd);
        auto slash = abs.rfind('/');
        std::string dir = abs.substr(0, slash);
        return std::pair{dir.empty() ? std::string("/") : dir, abs.substr(slash + 1)};
    };
    auto texts = [&](const ParamValue& value) {
        std::vector<std::string> out;
        if (const auto* one = std::get_if<Scalar>(&value)) {
            out.push_back(scalar_text(*one));
        } else if (const auto* many = std::get_if<std::vector<Scalar>>(&value)) {
            for (const auto& s : *many) {
                out.push_back(scalar_text(s));
            }
        }
        return out;
    };

    std::set<std::string> dirs;
    for (const auto& arg : cfg.arguments) {
        const auto* value = params.find(arg.id());
        if (arg.type != ArgumentType::file || value == nullptr) {
            continue;
        }
        for (const auto& v : texts(*value)) {
            dirs.insert(split_path(v).first);
        }
    }
    std::vector<std::string> ordered(dirs.begin(), dirs.end());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        run.mounts.push_back({ordered[i], "/mnt/v" + std::to_string(i)});
    }
    auto target_for = [&](const std::string& value) {
        auto [dir, base] = split_path(value);
        auto it = std::find(ordered.begin(), ordered.end(), dir);
        return run.mounts[static_cast<std::size_t>(it - ordered.begin())].target + "/" + base;
    };

    for (const auto& arg : cfg.arguments) {
        const auto* value = params.find(arg.id());
        if (value == nullptr) {
            continue;
        }
        if (arg.type != ArgumentType::file || std::holds_alternative<std::monostate>(*value)) {
            run.params.set(arg.id(), *value);
        } else if (const auto* one = std::get_if<Scalar>(value)) {
            run.params.set(arg.id(), Scalar{target_for(scalar_text(*one))});
        } else {
            std::vector<Scalar> rewritten;
            for (const auto& v : texts(*value)) {
                rewritten.emplace_back(target_for(v));
            }
            run.params.set(arg.id(), std::move(rewritten));
        }
    }

    run.argv = {std::string(runtime), "run", "--rm", "-i"};
    for (const auto& m : run.mounts) {
        run.argv.emplace_back("-v");
        run.argv.push_back(m.host + ":" + m.target);
    }
    run.argv.push_back(image_ref(cfg).str());
    for (const auto& arg : cfg.arguments) {
        const auto* value = run.params.find(arg.id());
        if (value == nullptr || std::holds_alternative<std::monostate>(*value)) {
            continue;
        }
        if (arg.type == ArgumentType::boolean_true) {
            const auto* one = std::get_if<Scalar>(value);
            if (one != nullptr && std::get_if<bool>(one) != nullptr && std::get<bool>(*one)) {
                run.argv.push_back(arg.name);
            }
            continue;
        }
        for (const auto& v : texts(*value)) {
            run.argv.push_back(arg.name);
            run.argv.push_back(v);
        }
    }
    return run;
}

}  // namespace compkit
