#include "support.hpp"

#include "compkit/arguments.hpp"
#include "compkit/build.hpp"
#include "compkit/errors.hpp"
#include "compkit/injection.hpp"
#include "compkit/process.hpp"
#include "compkit/util.hpp"

#include <algorithm>

namespace compkit::testing {

namespace fs = std::filesystem;

fs::path fixture(std::string_view relative) { return fs::path(COMPKIT_FIXTURES_DIR) / relative; }

fs::path tool_path() { return COMPKIT_TOOL_PATH; }

bool have_program(std::string_view program) { return !find_executable(program).empty(); }

TempDir::TempDir() : path_(fs::canonical(make_temp_dir("compkit-ut"))) {}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

nlohmann::json to_json(const Scalar& value) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Real>) {
                return v.value;
            } else {
                return v;
            }
        },
        value);
}

nlohmann::json to_json(const ParamMap& params) {
    auto out = nlohmann::json::object();
    for (const auto& [key, value] : params) {
        if (std::holds_alternative<std::monostate>(value)) {
            out[key] = nullptr;
        } else if (const auto* one = std::get_if<Scalar>(&value)) {
            out[key] = to_json(*one);
        } else {
            auto list = nlohmann::json::array();
            for (const auto& s : std::get<std::vector<Scalar>>(value)) {
                list.push_back(to_json(s));
            }
            out[key] = list;
        }
    }
    return out;
}

namespace {

template <typename T>
const T& pick(std::mt19937& rng, const std::vector<T>& pool) {
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string value_for(std::mt19937& rng, const ArgumentSpec& arg, const std::string& existing,
                      const std::string& missing) {
    static const std::vector<std::string> ints{"abc", "4.5", "", "-0", "+7", "007", "9223372036854775807",
                                               "9223372036854775808", "-9223372036854775808", "1e3", " 1"};
    static const std::vector<std::string> reals{"1e-3", "0.5", ".5", "5.", "-2.25E+2", "+3", "abc", "1e",
                                                "", "nan", "inf", "00012.50", "1.5e-300", "-0.0", "."};
    static const std::vector<std::string> bools{"true", "FALSE", "Yes", "no", "1", "0", "maybe", "", "TRUE "};
    switch (arg.type) {
        case ArgumentType::integer:
            if (chance(rng, 0.6)) {
                return std::to_string(std::uniform_int_distribution<std::int64_t>(-100000, 100000)(rng));
            }
            return pick(rng, ints);
        case ArgumentType::real:
            if (chance(rng, 0.5)) {
                auto whole = std::to_string(std::uniform_int_distribution<int>(-999, 999)(rng));
                return whole + "." + std::to_string(std::uniform_int_distribution<int>(0, 9999)(rng)) +
                       (chance(rng, 0.3) ? "e" + std::to_string(std::uniform_int_distribution<int>(-30, 30)(rng))
                                         : "");
            }
            return pick(rng, reals);
        case ArgumentType::boolean: return pick(rng, bools);
        case ArgumentType::file:
            if (arg.direction == Direction::output) {
                return chance(rng, 0.5) ? missing : nasty_string(rng);
            }
            return chance(rng, 0.75) ? existing : missing;
        default: break;
    }
    if (chance(rng, 0.1)) {
        return "-x";
    }
    return nasty_string(rng);
}

}  // namespace

std::string nasty_string(std::mt19937& rng) {
    static const std::vector<std::string> pieces{
        "a",  "Z",  "0",  " ",  "\t", "\n", "'",  "\"", "\\", "$",  "`",    "!",     "*",  "?",    "~",
        "#",  ";",  "&",  "|",  "<",  ">",  "(",  ")",  "{",  "}",  "[",    "]",     "%",  "é",    "日本",
        "😀", ":",  ",",  "=",  "-",  "\r", "$(", "${", "\\n", "'\\''", "\"\"\"", "\\\\", "COMPKIT", "//"};
    auto length = std::uniform_int_distribution<int>(0, 8)(rng);
    std::string out;
    for (int i = 0; i < length; ++i) {
        out += pick(rng, pieces);
    }
    return out;
}

std::vector<std::string> random_argv(std::mt19937& rng, const ComponentConfig& cfg, const std::string& existing,
                                     const std::string& missing) {
    std::vector<std::string> argv;
    const auto& args = cfg.arguments;
    auto groups = std::uniform_int_distribution<int>(0, 6)(rng);
    // Keep most vectors past the required-argument check.
    std::vector<const ArgumentSpec*> required;
    for (const auto& a : args) {
        if (a.required && chance(rng, 0.85)) {
            required.push_back(&a);
        }
    }
    auto emit_arg = [&](const ArgumentSpec& arg, bool allow_missing_value) {
        std::string flag = arg.name;
        if (!arg.alternatives.empty() && chance(rng, 0.3)) {
            flag = pick(rng, arg.alternatives);
        }
        if (arg.type == ArgumentType::boolean_true) {
            argv.push_back(chance(rng, 0.1) ? flag + "=" + nasty_string(rng) : flag);
            return;
        }
        std::string value;
        if (arg.multiple && chance(rng, 0.5)) {
            auto n = std::uniform_int_distribution<int>(1, 3)(rng);
            for (int i = 0; i < n; ++i) {
                value += (i > 0 ? arg.multiple_sep : "") + value_for(rng, arg, existing, missing);
            }
        } else {
            value = value_for(rng, arg, existing, missing);
        }
        if (allow_missing_value && chance(rng, 0.05)) {
            argv.push_back(flag);
            return;
        }
        if (chance(rng, 0.3)) {
            argv.push_back(flag + "=" + value);
        } else {
            argv.push_back(flag);
            argv.push_back(value);
        }
    };
    auto required_at = std::uniform_int_distribution<int>(0, groups)(rng);
    for (int g = 0; g <= groups; ++g) {
        if (g == required_at) {
            for (const auto* a : required) {
                emit_arg(*a, false);
            }
        }
        if (g == groups) {
            break;
        }
        auto roll = std::uniform_real_distribution<double>(0, 1)(rng);
        if (roll < 0.78 && !args.empty()) {
            emit_arg(pick(rng, args), g + 1 == groups);
        } else if (roll < 0.86) {
            argv.push_back(chance(rng, 0.5) ? "--nope" : "-z");
        } else if (roll < 0.92) {
            argv.push_back(chance(rng, 0.5) ? "stray" : "");
        } else if (roll < 0.96) {
            argv.push_back("--help");
        } else {
            argv.push_back("--version");
        }
    }
    return argv;
}

namespace {

std::string describe(const std::vector<std::string>& argv) {
    std::string out;
    for (const auto& a : argv) {
        out += " " + shell_quote(a);
    }
    return out;
}

// Drops the "compkit: keeping DIR" line, returning DIR.
std::string take_kept_dir(std::string& err) {
    static constexpr std::string_view prefix = "compkit: keeping ";
    auto pos = err.find(prefix);
    if (pos == std::string::npos) {
        return {};
    }
    auto end = err.find('\n', pos);
    auto dir = err.substr(pos + prefix.size(), end - pos - prefix.size());
    err.erase(pos, end == std::string::npos ? std::string::npos : end - pos + 1);
    return dir;
}

}  // namespace

OracleStats run_oracle(const ComponentConfig& cfg, const fs::path& build_dir, const OracleOptions& opts) {
    OracleStats stats;
    std::mt19937 rng(opts.seed);
    const bool check_injection = opts.check_injection;
    TempDir work;
    auto existing = (work.path() / "present.txt").string();
    write_file(existing, "x\n");
    auto missing = (work.path() / "absent" / "gone.txt").string();

    auto resources_dir = fs::canonical(build_dir).string();
    auto meta = native_meta(cfg, resources_dir);
    const auto& main = cfg.main_script();
    auto language = *main.language;
    auto script_name = fs::path(main.destination()).filename().string();
    auto script_text = read_file(build_dir / main.destination());
    auto wrapper = (build_dir / cfg.name).string();

    auto fail = [&](const std::vector<std::string>& argv, const std::string& what) {
        if (stats.mismatches.size() < 20) {
            stats.mismatches.push_back(what + " for argv:" + describe(argv));
        } else {
            stats.mismatches.emplace_back();
        }
    };

    for (int i = 0; i < opts.count; ++i) {
        auto argv = random_argv(rng, cfg, existing, missing);
        ++stats.cases;

        std::vector<std::string> command{wrapper};
        command.insert(command.end(), argv.begin(), argv.end());
        ProcessOptions options;
        options.cwd = work.path();
        options.env = opts.env;
        options.env["COMPKIT_DEBUG"] = check_injection ? "1" : "";
        auto got = run_process(command, options);
        auto kept = take_kept_dir(got.err);
        struct Cleanup {
            std::string dir;
            ~Cleanup() {
                std::error_code ec;
                if (!dir.empty()) fs::remove_all(dir, ec);
            }
        } cleanup{kept};

        std::string expected_error;
        try {
            auto outcome = parse_args(cfg.arguments, argv);
            if (outcome.kind == ParseOutcome::Kind::help) {
                ++stats.help_or_version;
                if (got.exit_code != 0 || got.out != render_help(cfg)) {
                    fail(argv, "help mismatch (exit " + std::to_string(got.exit_code) + ")");
                }
                continue;
            }
            if (outcome.kind == ParseOutcome::Kind::version) {
                ++stats.help_or_version;
                if (got.exit_code != 0 || got.out != version_line(cfg) + "\n") {
                    fail(argv, "version mismatch: " + got.out);
                }
                continue;
            }
            auto file_errors = check_files(cfg.arguments, outcome.params);
            if (!file_errors.empty()) {
                ++stats.file_errors;
                expected_error = file_errors.front().message();
            } else {
                ++stats.params;
                std::string warnings;
                for (const auto& w : outcome.warnings) {
                    warnings += "warning: " + w + "\n";
                }
                if (got.exit_code != 0) {
                    fail(argv, "expected success, wrapper exited " + std::to_string(got.exit_code) + ": " + got.err);
                    continue;
                }
                if (got.err != warnings) {
                    fail(argv, "stderr mismatch: expected '" + warnings + "' got '" + got.err + "'");
                }
                if (opts.compare_output) {
                nlohmann::json expected{{"par", to_json(outcome.params)}, {"meta", nlohmann::json::object()}};
                for (const auto& [k, v] : meta) {
                    expected["meta"][k] = v;
                }
                auto actual = nlohmann::json::parse(got.out, nullptr, false);
                if (actual.is_discarded()) {
                    fail(argv, "unparsable output: " + got.out);
                } else if (actual != expected) {
                    fail(argv, "params mismatch: expected " + expected.dump() + " got " + actual.dump());
                }
                }
                if (check_injection) {
                    auto want = inject(script_text, language, serialize_params(language, outcome.params, meta));
                    std::string have;
                    try {
                        have = read_file(fs::path(kept) / script_name);
                    } catch (const std::exception&) {
                        have = "<missing>";
                    }
                    if (have != want) {
                        fail(argv, "injected script differs from serialize_params");
                    }
                }
            }
        } catch (const UsageError& e) {
            ++stats.usage_errors;
            expected_error = e.what();
        }
        if (expected_error.empty()) {
            continue;
        }
        auto tail = "error: " + expected_error + "\n";
        if (got.exit_code != 1 || !got.err.ends_with(tail)) {
            fail(argv, "expected exit 1 with '" + tail + "', got exit " + std::to_string(got.exit_code) +
                           " and '" + got.err + "'");
        }
    }
    return stats;
}

std::vector<std::string> shell_words(const std::string& line) {
    auto result = run_process({"bash", "-c", "eval \"set -- $1\" && printf '%s\\0' \"$@\"", "bash", line});
    if (result.exit_code != 0) {
        throw Error("shell could not tokenize: " + result.err);
    }
    std::vector<std::string> words;
    std::string current;
    for (char c : result.out) {
        if (c == '\0') {
            words.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    return words;
}

bool delimiters_balanced(std::string_view text) {
    std::vector<char> stack;
    std::size_t i = 0;
    auto closes = [](char open) { return open == '(' ? ')' : open == '[' ? ']' : '}'; };
    while (i < text.size()) {
        auto rest = text.substr(i);
        if (rest.starts_with("//")) {
            auto nl = text.find('\n', i);
            i = nl == std::string_view::npos ? text.size() : nl + 1;
            continue;
        }
        if (rest.starts_with("\"\"\"")) {
            auto end = text.find("\"\"\"", i + 3);
            if (end == std::string_view::npos) {
                return false;
            }
            i = end + 3;
            continue;
        }
        char c = text[i];
        if (c == '\'' || c == '"') {
            ++i;
            while (i < text.size() && text[i] != c) {
                if (text[i] == '\n') {
                    return false;
                }
                i += text[i] == '\\' ? 2 : 1;
            }
            if (i >= text.size()) {
                return false;
            }
            ++i;
            continue;
        }
        if (c == '(' || c == '[' || c == '{') {
            stack.push_back(c);
        } else if (c == ')' || c == ']' || c == '}') {
            if (stack.empty() || closes(stack.back()) != c) {
                return false;
            }
            stack.pop_back();
        }
        ++i;
    }
    return stack.empty();
}

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

}  // namespace compkit::testing
