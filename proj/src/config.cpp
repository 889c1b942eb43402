#include "compkit/config.hpp"

#include "compkit/arguments.hpp"
#include "compkit/errors.hpp"
#include "compkit/util.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <regex>
#include <set>

namespace compkit {

namespace fs = std::filesystem;

std::string_view to_string(Language language) {
    switch (language) {
        case Language::bash: return "bash";
        case Language::python: return "python";
        case Language::r: return "r";
        case Language::javascript: return "javascript";
    }
    return "bash";
}

std::optional<Language> language_from_string(std::string_view text) {
    for (auto lang : {Language::bash, Language::python, Language::r, Language::javascript}) {
        if (to_string(lang) == text) {
            return lang;
        }
    }
    return std::nullopt;
}

std::string_view script_extension(Language language) {
    switch (language) {
        case Language::bash: return "sh";
        case Language::python: return "py";
        case Language::r: return "R";
        case Language::javascript: return "js";
    }
    return "sh";
}

std::string_view runtime_executable(Language language) {
    switch (language) {
        case Language::bash: return "bash";
        case Language::python: return "python3";
        case Language::r: return "Rscript";
        case Language::javascript: return "node";
    }
    return "bash";
}

std::string_view to_string(ResourceKind kind) {
    return kind == ResourceKind::script ? "script" : "plain_file";
}

std::string_view to_string(EngineKind kind) {
    switch (kind) {
        case EngineKind::native: return "native";
        case EngineKind::container: return "container";
        case EngineKind::workflow: return "workflow";
    }
    return "native";
}

std::optional<EngineKind> engine_kind_from_string(std::string_view text) {
    for (auto kind : {EngineKind::native, EngineKind::container, EngineKind::workflow}) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string Resource::destination() const {
    if (dest) {
        return *dest;
    }
    if (path) {
        return fs::path(*path).filename().string();
    }
    if (language) {
        return "main." + std::string(script_extension(*language));
    }
    return "main.txt";
}

const EngineSpec* ComponentConfig::engine(EngineKind kind) const {
    for (const auto& e : engines) {
        if (e.kind == kind) {
            return &e;
        }
    }
    return nullptr;
}

const ArgumentSpec* ComponentConfig::argument(std::string_view flag) const {
    for (const auto& a : arguments) {
        if (a.name == flag) {
            return &a;
        }
        if (std::find(a.alternatives.begin(), a.alternatives.end(), flag) != a.alternatives.end()) {
            return &a;
        }
    }
    return nullptr;
}

bool ComponentConfig::same_definition(const ComponentConfig& other) const {
    return name == other.name && namespace_path == other.namespace_path &&
           version == other.version && description == other.description &&
           arguments == other.arguments && resources == other.resources &&
           test_resources == other.test_resources && engines == other.engines;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::error; });
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

ParseError error_at(const YAML::Node& node, const std::string& message) {
    auto mark = node.Mark();
    if (mark.is_null()) {
        return ParseError(message);
    }
    return ParseError(message, static_cast<std::size_t>(mark.line) + 1,
                      static_cast<std::size_t>(mark.column) + 1);
}

class Reader {
public:
    explicit Reader(std::vector<std::string>& warnings) : warnings_(warnings) {}

    void check_keys(const YAML::Node& map, const std::string& where,
                    std::initializer_list<std::string_view> known) {
        for (const auto& item : map) {
            auto key = item.first.as<std::string>();
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                warnings_.push_back(where + "unknown key '" + key + "' ignored");
            }
        }
    }

    static std::string scalar(const YAML::Node& node, const std::string& field) {
        if (!node.IsScalar()) {
            throw error_at(node, "field '" + field + "' must be a scalar");
        }
        return node.Scalar();
    }

    static std::optional<std::string> opt_scalar(const YAML::Node& map, const std::string& field) {
        auto node = map[field];
        if (!node || node.IsNull()) {
            return std::nullopt;
        }
        return scalar(node, field);
    }

    static bool flag(const YAML::Node& map, const std::string& field, bool fallback) {
        auto node = map[field];
        if (!node || node.IsNull()) {
            return fallback;
        }
        try {
            return node.as<bool>();
        } catch (const YAML::Exception&) {
            throw error_at(node, "field '" + field + "' must be a boolean");
        }
    }

    static std::vector<std::string> string_list(const YAML::Node& node, const std::string& field) {
        std::vector<std::string> out;
        if (!node || node.IsNull()) {
            return out;
        }
        if (node.IsScalar()) {
            out.push_back(node.Scalar());
            return out;
        }
        if (!node.IsSequence()) {
            throw error_at(node, "field '" + field + "' must be a list of strings");
        }
        for (const auto& item : node) {
            out.push_back(scalar(item, field));
        }
        return out;
    }

    static const YAML::Node sequence(const YAML::Node& map, const std::string& field) {
        auto node = map[field];
        if (node && !node.IsNull() && !node.IsSequence()) {
            throw error_at(node, "field '" + field + "' must be a list");
        }
        return node;
    }

private:
    std::vector<std::string>& warnings_;
};

ArgumentSpec parse_argument(const YAML::Node& node, std::size_t index, Reader& reader) {
    std::string where = "arguments[" + std::to_string(index) + "]: ";
    if (!node.IsMap()) {
        throw error_at(node, where + "expected a mapping");
    }
    reader.check_keys(node, where,
                      {"name", "alternatives", "type", "required", "default", "multiple",
                       "multiple_sep", "must_exist", "direction", "description"});
    ArgumentSpec spec;
    auto name = Reader::opt_scalar(node, "name");
    if (!name || name->empty()) {
        throw error_at(node, where + "missing required field 'name'");
    }
    spec.name = *name;
    spec.alternatives = Reader::string_list(node["alternatives"], "alternatives");
    if (auto type = Reader::opt_scalar(node, "type")) {
        auto parsed = argument_type_from_string(*type);
        if (!parsed) {
            throw error_at(node["type"], where + "unknown argument type '" + *type +
                                             "' (allowed: string, integer, double, boolean, "
                                             "boolean_true, file)");
        }
        spec.type = *parsed;
    }
    spec.required = Reader::flag(node, "required", false);
    spec.multiple = Reader::flag(node, "multiple", false);
    spec.must_exist = Reader::flag(node, "must_exist", false);
    if (auto sep = Reader::opt_scalar(node, "multiple_sep")) {
        spec.multiple_sep = *sep;
    }
    if (auto dir = Reader::opt_scalar(node, "direction")) {
        auto parsed = direction_from_string(*dir);
        if (!parsed) {
            throw error_at(node["direction"],
                           where + "unknown direction '" + *dir + "' (allowed: input, output)");
        }
        spec.direction = *parsed;
    }
    spec.description = Reader::opt_scalar(node, "description").value_or("");
    auto def = node["default"];
    if (def && !def.IsNull()) {
        if (def.IsSequence()) {
            if (!spec.multiple) {
                throw error_at(def, where + "a list default requires 'multiple: true'");
            }
            spec.default_value = Reader::string_list(def, "default");
        } else if (spec.multiple && !spec.multiple_sep.empty()) {
            spec.default_value = split(Reader::scalar(def, "default"), spec.multiple_sep);
        } else {
            spec.default_value = std::vector<std::string>{Reader::scalar(def, "default")};
        }
    }
    return spec;
}

Resource parse_resource(const YAML::Node& node, const std::string& where, Reader& reader) {
    if (!node.IsMap()) {
        throw error_at(node, where + "expected a mapping");
    }
    reader.check_keys(node, where, {"kind", "language", "path", "text", "dest"});
    Resource res;
    if (auto lang = Reader::opt_scalar(node, "language")) {
        auto parsed = language_from_string(*lang);
        if (!parsed) {
            throw error_at(node["language"], where + "unknown language '" + *lang +
                                                 "' (allowed: bash, python, r, javascript)");
        }
        res.language = *parsed;
    }
    if (auto kind = Reader::opt_scalar(node, "kind")) {
        if (*kind == "script") {
            res.kind = ResourceKind::script;
        } else if (*kind == "plain_file") {
            res.kind = ResourceKind::plain_file;
        } else {
            throw error_at(node["kind"],
                           where + "unknown resource kind '" + *kind + "' (allowed: script, plain_file)");
        }
    } else {
        res.kind = res.language ? ResourceKind::script : ResourceKind::plain_file;
    }
    res.path = Reader::opt_scalar(node, "path");
    res.text = Reader::opt_scalar(node, "text");
    res.dest = Reader::opt_scalar(node, "dest");
    return res;
}

SetupRequirement parse_setup(const YAML::Node& node, const std::string& where, Reader& reader) {
    if (!node.IsMap()) {
        throw error_at(node, where + "expected a mapping");
    }
    reader.check_keys(node, where, {"manager", "packages"});
    SetupRequirement req;
    req.manager = Reader::opt_scalar(node, "manager").value_or("");
    req.packages = Reader::string_list(node["packages"], "packages");
    return req;
}

EngineSpec parse_engine(const YAML::Node& node, std::size_t index, Reader& reader) {
    std::string where = "engines[" + std::to_string(index) + "]: ";
    if (!node.IsMap()) {
        throw error_at(node, where + "expected a mapping");
    }
    reader.check_keys(node, where, {"kind", "image", "registry", "setup", "directives"});
    EngineSpec engine;
    auto kind = Reader::opt_scalar(node, "kind");
    if (!kind) {
        throw error_at(node, where + "missing required field 'kind'");
    }
    auto parsed = engine_kind_from_string(*kind);
    if (!parsed) {
        throw error_at(node["kind"], where + "unknown engine kind '" + *kind +
                                         "' (allowed: native, container, workflow)");
    }
    engine.kind = *parsed;
    engine.image = Reader::opt_scalar(node, "image").value_or("");
    engine.registry = Reader::opt_scalar(node, "registry");
    auto setup = Reader::sequence(node, "setup");
    if (setup) {
        for (std::size_t i = 0; i < setup.size(); ++i) {
            engine.setup.push_back(
                parse_setup(setup[i], where + "setup[" + std::to_string(i) + "]: ", reader));
        }
    }
    auto directives = node["directives"];
    if (directives && !directives.IsNull()) {
        if (!directives.IsMap()) {
            throw error_at(directives, where + "field 'directives' must be a mapping");
        }
        for (const auto& item : directives) {
            engine.directives[item.first.as<std::string>()] =
                Reader::scalar(item.second, "directives");
        }
    }
    return engine;
}

}  // namespace

ComponentConfig parse_config(std::string_view yaml_text, const fs::path& source_path) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line) + 1,
                         static_cast<std::size_t>(e.mark.column) + 1);
    }
    if (!root.IsMap()) {
        throw ParseError("config must be a YAML mapping");
    }

    ComponentConfig cfg;
    cfg.config_path = source_path.empty() ? fs::path{} : fs::absolute(source_path).lexically_normal();
    Reader reader(cfg.warnings);
    try {
        reader.check_keys(root, "",
                          {"name", "namespace", "version", "description", "arguments", "resources",
                           "test_resources", "engines"});

        auto name = Reader::opt_scalar(root, "name");
        if (!name || name->empty()) {
            throw ParseError("missing required field 'name'");
        }
        cfg.name = *name;
        cfg.namespace_path = Reader::opt_scalar(root, "namespace");
        if (auto version = Reader::opt_scalar(root, "version")) {
            cfg.version = *version;
        }
        cfg.description = Reader::opt_scalar(root, "description").value_or("");

        auto args = Reader::sequence(root, "arguments");
        std::set<std::string> seen;
        if (args) {
            for (std::size_t i = 0; i < args.size(); ++i) {
                auto spec = parse_argument(args[i], i, reader);
                std::vector<std::string> flags{spec.name};
                flags.insert(flags.end(), spec.alternatives.begin(), spec.alternatives.end());
                for (const auto& flag : flags) {
                    if (!seen.insert(flag).second) {
                        throw error_at(args[i], "duplicate argument name " + flag);
                    }
                }
                cfg.arguments.push_back(std::move(spec));
            }
        }

        auto resources = Reader::sequence(root, "resources");
        if (!resources || resources.size() == 0) {
            throw ParseError("missing required field 'resources' (at least the main script)");
        }
        for (std::size_t i = 0; i < resources.size(); ++i) {
            cfg.resources.push_back(
                parse_resource(resources[i], "resources[" + std::to_string(i) + "]: ", reader));
        }
        auto tests = Reader::sequence(root, "test_resources");
        if (tests) {
            for (std::size_t i = 0; i < tests.size(); ++i) {
                cfg.test_resources.push_back(
                    parse_resource(tests[i], "test_resources[" + std::to_string(i) + "]: ", reader));
            }
        }

        auto engines = Reader::sequence(root, "engines");
        if (engines && engines.size() > 0) {
            for (std::size_t i = 0; i < engines.size(); ++i) {
                cfg.engines.push_back(parse_engine(engines[i], i, reader));
            }
        } else {
            cfg.engines.push_back(EngineSpec{});
        }
    } catch (const YAML::Exception& e) {
        throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line) + 1,
                         static_cast<std::size_t>(e.mark.column) + 1);
    }
    return cfg;
}

ComponentConfig load_config(const fs::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    return parse_config(text, path);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

const std::regex& identifier_re() {
    static const std::regex re("[a-z][a-z0-9_]*");
    return re;
}

const std::regex& long_flag_re() {
    static const std::regex re("--[A-Za-z][A-Za-z0-9_]*");
    return re;
}

const std::regex& alt_flag_re() {
    static const std::regex re("--?[A-Za-z][A-Za-z0-9_]*");
    return re;
}

const std::regex& version_re() {
    static const std::regex re("[A-Za-z0-9_][A-Za-z0-9_.-]*");
    return re;
}

bool unsafe_package_name(const std::string& package) {
    if (package.empty()) {
        return true;
    }
    return package.find_first_of(";|&$`<>()'\"\\ \t\n\r") != std::string::npos;
}

void validate_resource(const Resource& res, const std::string& where, std::vector<Diagnostic>& out) {
    if (res.path.has_value() == res.text.has_value()) {
        out.push_back({Severity::error, where + "exactly one of 'path' or 'text' must be set"});
    }
    if (res.kind == ResourceKind::script && !res.language) {
        out.push_back({Severity::error, where + "script resources need a 'language'"});
    }
    if (res.path && res.path->empty()) {
        out.push_back({Severity::error, where + "'path' is empty"});
    }
    auto dest = fs::path(res.destination());
    if (dest.empty() || dest.is_absolute() ||
        std::any_of(dest.begin(), dest.end(), [](const fs::path& p) { return p == ".."; })) {
        out.push_back({Severity::error, where + "destination '" + dest.string() +
                                            "' must be a relative path inside the output directory"});
    }
}

void validate_argument(const ArgumentSpec& arg, std::vector<Diagnostic>& out) {
    std::string where = "argument " + arg.name + ": ";
    if (!std::regex_match(arg.name, long_flag_re())) {
        out.push_back({Severity::error,
                       where + "name must look like --identifier (letters, digits, underscores)"});
    }
    if (arg.name == "--help" || arg.name == "--version") {
        out.push_back({Severity::error, where + "name is reserved"});
    }
    for (const auto& alt : arg.alternatives) {
        if (!std::regex_match(alt, alt_flag_re())) {
            out.push_back({Severity::error, where + "alternative '" + alt +
                                                "' must look like -x or --identifier"});
        }
        if (alt == "--help" || alt == "--version") {
            out.push_back({Severity::error, where + "alternative '" + alt + "' is reserved"});
        }
    }
    if (arg.type == ArgumentType::boolean_true) {
        if (arg.required) {
            out.push_back({Severity::error, where + "boolean_true arguments cannot be required"});
        }
        if (arg.multiple) {
            out.push_back({Severity::error, where + "boolean_true arguments cannot be multiple"});
        }
        if (arg.default_value &&
            !(arg.default_value->size() == 1 && ascii_lower(arg.default_value->front()) == "false")) {
            out.push_back({Severity::error, where + "boolean_true arguments default to false"});
        }
    }
    if (arg.multiple && arg.multiple_sep.size() != 1) {
        out.push_back({Severity::error, where + "multiple_sep must be a single character"});
    }
    if (arg.type != ArgumentType::file) {
        if (arg.must_exist) {
            out.push_back({Severity::warning, where + "must_exist only applies to file arguments"});
        }
        if (arg.direction == Direction::output) {
            out.push_back({Severity::warning, where + "direction only applies to file arguments"});
        }
    } else if (arg.must_exist && arg.direction == Direction::output) {
        out.push_back({Severity::warning, where + "must_exist is ignored for output files"});
    }
    if (arg.required && arg.default_value) {
        out.push_back({Severity::warning, where + "default is never used for a required argument"});
    }
    if (arg.default_value && arg.type != ArgumentType::boolean_true) {
        if (!arg.multiple && arg.default_value->size() != 1) {
            out.push_back({Severity::error, where + "default must be a single value"});
        }
        for (const auto& raw : *arg.default_value) {
            try {
                coerce(arg.type, raw);
            } catch (const CoerceError& e) {
                out.push_back({Severity::error, where + "default '" + raw + "' is not a valid " +
                                                    std::string(to_string(arg.type))});
            }
        }
    }
}

}  // namespace

std::vector<Diagnostic> validate_config(const ComponentConfig& cfg) {
    std::vector<Diagnostic> out;
    for (const auto& w : cfg.warnings) {
        out.push_back({Severity::warning, w});
    }
    if (cfg.name.empty()) {
        out.push_back({Severity::error, "name is empty"});
    } else if (!std::regex_match(cfg.name, identifier_re())) {
        out.push_back({Severity::error,
                       "name '" + cfg.name + "' must match [a-z][a-z0-9_]*"});
    }
    if (cfg.namespace_path) {
        bool ok = !cfg.namespace_path->empty();
        for (const auto& seg : split(*cfg.namespace_path, "/")) {
            ok = ok && std::regex_match(seg, identifier_re());
        }
        if (!ok) {
            out.push_back({Severity::error, "namespace '" + *cfg.namespace_path +
                                                "' must be slash-separated identifiers"});
        }
    }
    if (!std::regex_match(cfg.version, version_re())) {
        out.push_back({Severity::error, "version '" + cfg.version +
                                            "' may only contain letters, digits, '.', '_' and '-'"});
    }

    if (cfg.resources.empty()) {
        out.push_back({Severity::error, "resources must list the main script first"});
    } else {
        const auto& main = cfg.resources.front();
        if (main.kind != ResourceKind::script || !main.language) {
            out.push_back({Severity::error,
                           "resources[0] must be a script with a language (bash, python, r, javascript)"});
        }
    }
    for (std::size_t i = 0; i < cfg.resources.size(); ++i) {
        validate_resource(cfg.resources[i], "resources[" + std::to_string(i) + "]: ", out);
    }
    for (std::size_t i = 0; i < cfg.test_resources.size(); ++i) {
        validate_resource(cfg.test_resources[i], "test_resources[" + std::to_string(i) + "]: ", out);
    }

    std::set<std::string> flags;
    for (const auto& arg : cfg.arguments) {
        validate_argument(arg, out);
        std::vector<std::string> names{arg.name};
        names.insert(names.end(), arg.alternatives.begin(), arg.alternatives.end());
        for (const auto& n : names) {
            if (!flags.insert(n).second) {
                out.push_back({Severity::error, "duplicate argument name " + n});
            }
        }
    }

    std::set<EngineKind> kinds;
    for (const auto& engine : cfg.engines) {
        std::string where = "engine " + std::string(to_string(engine.kind)) + ": ";
        if (!kinds.insert(engine.kind).second) {
            out.push_back({Severity::error, where + "declared more than once"});
        }
        if (engine.kind == EngineKind::container) {
            if (engine.image.empty()) {
                out.push_back({Severity::error, where + "'image' must not be empty"});
            }
            if (engine.registry && engine.registry->empty()) {
                out.push_back({Severity::error, where + "'registry' must not be empty when set"});
            }
            for (const auto& req : engine.setup) {
                static const std::set<std::string> managers{"apt", "apk", "yum", "pip", "r"};
                if (!managers.contains(req.manager)) {
                    out.push_back({Severity::error, where + "unknown setup manager '" + req.manager +
                                                        "' (allowed: apt, apk, yum, pip, r)"});
                }
                if (req.packages.empty()) {
                    out.push_back({Severity::error, where + "setup '" + req.manager +
                                                        "' lists no packages"});
                }
                for (const auto& pkg : req.packages) {
                    if (unsafe_package_name(pkg)) {
                        out.push_back({Severity::error, where + "package name '" + pkg +
                                                            "' contains shell metacharacters"});
                    }
                }
            }
        } else if (!engine.image.empty() || !engine.setup.empty()) {
            out.push_back({Severity::warning, where + "image/setup only apply to container engines"});
        }
    }
    return out;
}

void require_valid(const ComponentConfig& cfg) {
    auto diagnostics = validate_config(cfg);
    std::vector<std::string> errors;
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::error) {
            errors.push_back(d.message);
        }
    }
    if (!errors.empty()) {
        throw ParseError("invalid config " + cfg.config_path.string() + ": " + join(errors, "; "));
    }
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

bool literal_block_safe(std::string_view text) {
    if (text.empty() || text.back() != '\n' || text.size() < 2 || text[text.size() - 2] == '\n') {
        return false;
    }
    if (text.front() == ' ' || text.front() == '\t' || text.front() == '\n') {
        return false;
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
        auto c = static_cast<unsigned char>(text[i]);
        if (c == '\n') {
            if (i > 0 && (text[i - 1] == ' ' || text[i - 1] == '\t')) {
                return false;
            }
            continue;
        }
        if (c < 0x20 || c == 0x7f) {
            return false;
        }
    }
    return true;
}

void emit_text(YAML::Emitter& out, const std::string& text) {
    bool plain_ok = true;
    for (unsigned char c : text) {
        if (c < 0x20 || c == 0x7f) {
            plain_ok = false;
            break;
        }
    }
    if (plain_ok) {
        out << text;
    } else if (literal_block_safe(text)) {
        out << YAML::Literal << text;
    } else {
        out << YAML::DoubleQuoted << text;
    }
}

void emit_resource(YAML::Emitter& out, const Resource& res) {
    out << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(res.kind));
    if (res.language) {
        out << YAML::Key << "language" << YAML::Value << std::string(to_string(*res.language));
    }
    if (res.path) {
        out << YAML::Key << "path" << YAML::Value;
        emit_text(out, *res.path);
    }
    if (res.text) {
        out << YAML::Key << "text" << YAML::Value;
        emit_text(out, *res.text);
    }
    if (res.dest) {
        out << YAML::Key << "dest" << YAML::Value;
        emit_text(out, *res.dest);
    }
    out << YAML::EndMap;
}

}  // namespace

std::string view_config(const ComponentConfig& cfg) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value;
    emit_text(out, cfg.name);
    if (cfg.namespace_path) {
        out << YAML::Key << "namespace" << YAML::Value;
        emit_text(out, *cfg.namespace_path);
    }
    out << YAML::Key << "version" << YAML::Value;
    emit_text(out, cfg.version);
    out << YAML::Key << "description" << YAML::Value;
    emit_text(out, cfg.description);

    out << YAML::Key << "arguments" << YAML::Value << YAML::BeginSeq;
    for (const auto& arg : cfg.arguments) {
        out << YAML::BeginMap;
        out << YAML::Key << "name" << YAML::Value;
        emit_text(out, arg.name);
        out << YAML::Key << "alternatives" << YAML::Value << YAML::Flow << arg.alternatives;
        out << YAML::Key << "type" << YAML::Value << std::string(to_string(arg.type));
        out << YAML::Key << "required" << YAML::Value << arg.required;
        if (arg.default_value) {
            out << YAML::Key << "default" << YAML::Value;
            if (arg.multiple) {
                out << YAML::BeginSeq;
                for (const auto& v : *arg.default_value) {
                    emit_text(out, v);
                }
                out << YAML::EndSeq;
            } else {
                emit_text(out, arg.default_value->front());
            }
        }
        out << YAML::Key << "multiple" << YAML::Value << arg.multiple;
        out << YAML::Key << "multiple_sep" << YAML::Value << YAML::DoubleQuoted << arg.multiple_sep;
        out << YAML::Key << "must_exist" << YAML::Value << arg.must_exist;
        out << YAML::Key << "direction" << YAML::Value << std::string(to_string(arg.direction));
        out << YAML::Key << "description" << YAML::Value;
        emit_text(out, arg.description);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "resources" << YAML::Value << YAML::BeginSeq;
    for (const auto& res : cfg.resources) {
        emit_resource(out, res);
    }
    out << YAML::EndSeq;
    out << YAML::Key << "test_resources" << YAML::Value << YAML::BeginSeq;
    for (const auto& res : cfg.test_resources) {
        emit_resource(out, res);
    }
    out << YAML::EndSeq;

    out << YAML::Key << "engines" << YAML::Value << YAML::BeginSeq;
    for (const auto& engine : cfg.engines) {
        out << YAML::BeginMap;
        out << YAML::Key << "kind" << YAML::Value << std::string(to_string(engine.kind));
        if (engine.kind == EngineKind::container || !engine.image.empty()) {
            out << YAML::Key << "image" << YAML::Value << engine.image;
        }
        if (engine.registry) {
            out << YAML::Key << "registry" << YAML::Value << *engine.registry;
        }
        if (engine.kind == EngineKind::container || !engine.setup.empty()) {
            out << YAML::Key << "setup" << YAML::Value << YAML::BeginSeq;
            for (const auto& req : engine.setup) {
                out << YAML::BeginMap;
                out << YAML::Key << "manager" << YAML::Value << req.manager;
                out << YAML::Key << "packages" << YAML::Value << YAML::Flow << req.packages;
                out << YAML::EndMap;
            }
            out << YAML::EndSeq;
        }
        if (engine.kind == EngineKind::workflow || !engine.directives.empty()) {
            out << YAML::Key << "directives" << YAML::Value << YAML::BeginMap;
            for (const auto& [key, value] : engine.directives) {
                out << YAML::Key << key << YAML::Value;
                emit_text(out, value);
            }
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;

    std::string text = out.c_str();
    text += '\n';
    return text;
}

// ---------------------------------------------------------------------------
// Resources

namespace {

std::vector<ResolvedResource> resolve_list(const std::vector<Resource>& list,
                                           const fs::path& base_dir, bool first_is_main,
                                           std::set<std::string>& taken,
                                           std::vector<std::string>& problems) {
    std::vector<ResolvedResource> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& res = list[i];
        ResolvedResource resolved;
        resolved.is_main = first_is_main && i == 0;
        resolved.dest = fs::path(res.destination()).lexically_normal();
        if (res.path) {
            fs::path source = fs::path(*res.path);
            if (source.is_relative()) {
                source = base_dir / source;
            }
            source = source.lexically_normal();
            std::error_code ec;
            if (!fs::is_regular_file(source, ec)) {
                problems.push_back("missing resource " + source.string());
            }
            resolved.source = source;
        } else {
            resolved.source = res.text.value_or("");
        }
        if (!taken.insert(resolved.dest.generic_string()).second) {
            problems.push_back("resource destination '" + resolved.dest.generic_string() +
                               "' is used more than once");
        }
        out.push_back(std::move(resolved));
    }
    return out;
}

}  // namespace

std::vector<ResolvedResource> resolve_resources(const ComponentConfig& cfg) {
    std::vector<std::string> problems;
    std::set<std::string> taken;
    auto out = resolve_list(cfg.resources, cfg.config_path.parent_path(), true, taken, problems);
    if (!problems.empty()) {
        throw ResourceError(std::move(problems));
    }
    return out;
}

std::vector<ResolvedResource> resolve_test_resources(const ComponentConfig& cfg) {
    std::vector<std::string> problems;
    std::set<std::string> taken;
    auto out = resolve_list(cfg.test_resources, cfg.config_path.parent_path(), false, taken, problems);
    if (!problems.empty()) {
        throw ResourceError(std::move(problems));
    }
    return out;
}

}  // namespace compkit
