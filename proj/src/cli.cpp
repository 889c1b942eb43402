#include "compkit/cli.hpp"

#include "compkit/build.hpp"
#include "compkit/config.hpp"
#include "compkit/errors.hpp"
#include "compkit/harness.hpp"
#include "compkit/namespace_ops.hpp"
#include "compkit/process.hpp"
#include "compkit/util.hpp"
#include "compkit/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <iostream>
#include <map>

namespace compkit {

namespace fs = std::filesystem;

namespace {

struct Subcommand {
    std::string summary;
    std::function<int(const std::vector<std::string>&, std::ostream&, std::ostream&)> handler;
};

const std::vector<std::string>& subcommand_order() {
    static const std::vector<std::string> order{"run",     "build",   "test",    "config-view", "ns-build",
                                                "ns-test", "ns-list", "version", "help"};
    return order;
}

std::string tool_line() { return std::string(tool_name) + " " + std::string(tool_version); }

EngineKind parse_engine(const std::string& text) {
    auto kind = engine_kind_from_string(text);
    if (!kind) {
        throw UsageError("unknown engine '" + text + "' (expected native, container or workflow)");
    }
    return *kind;
}

ReportStyle parse_style(const std::string& text) {
    if (text == "human") return ReportStyle::human;
    if (text == "machine") return ReportStyle::machine;
    throw UsageError("unknown format '" + text + "' (expected human or machine)");
}

ComponentConfig load_checked(const std::string& path, std::ostream& err) {
    auto cfg = load_config(fs::absolute(path));
    for (const auto& w : cfg.warnings) {
        err << "warning: " << w << "\n";
    }
    auto diagnostics = validate_config(cfg);
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::warning) {
            err << "warning: " << d.message << "\n";
        }
    }
    if (has_errors(diagnostics)) {
        std::vector<std::string> messages;
        for (const auto& d : diagnostics) {
            if (d.severity == Severity::error) {
                messages.push_back(d.message);
            }
        }
        throw UsageError("invalid config " + path + ": " + join(messages, "; "));
    }
    return cfg;
}

// Parses `args` with a CLI11 app. Returns -1 to continue, else an exit code.
int parse_app(CLI::App& app, std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run 'compkit help " << app.get_name().substr(app.get_name().find(' ') + 1)
            << "' for usage\n";
        return exit_user_error;
    }
    return -1;
}

std::unique_ptr<CLI::App> make_app(const std::string& sub, const std::string& summary) {
    auto app = std::make_unique<CLI::App>(summary, "compkit " + sub);
    app->set_help_flag("-h,--help", "Show this help and exit");
    return app;
}


struct Options {
    std::string config;
    std::string output;
    std::string engine = "native";
    std::vector<std::string> engines;
    std::string src = "src";
    std::string target = "target";
    unsigned parallel = 1;
    std::string format = "human";
    bool setup = false;
};

std::unique_ptr<CLI::App> app_for(const std::string& sub, Options& o) {
    if (sub == "run") {
        auto app = make_app(sub, "Build a component into a temporary directory and run it.\n"
                                 "Arguments after `--` are passed to the component.");
        app->add_option("config", o.config, "Component config (*.comp.yaml)")->required();
        app->add_option("--engine", o.engine, "native or container")->capture_default_str();
        app->usage("compkit run <config> [--engine E] [-- component arguments...]");
        return app;
    }
    if (sub == "build") {
        auto app = make_app(sub, "Build a component into an output directory.");
        app->add_option("config", o.config, "Component config (*.comp.yaml)")->required();
        app->add_option("-o,--output", o.output, "Output directory")->required();
        app->add_option("--engine", o.engine, "native, container or workflow")->capture_default_str();
        return app;
    }
    if (sub == "test") {
        auto app = make_app(sub, "Build a component and run its unit tests.");
        app->add_option("config", o.config, "Component config (*.comp.yaml)")->required();
        app->add_option("--engine", o.engine, "native or container")->capture_default_str();
        app->add_option("--format", o.format, "human or machine")->capture_default_str();
        return app;
    }
    if (sub == "config-view") {
        auto app = make_app(sub, "Print the normalized config with every default filled in.");
        app->add_option("config", o.config, "Component config (*.comp.yaml)")->required();
        return app;
    }
    if (sub == "ns-build") {
        auto app = make_app(sub, "Build every component under a source tree into\n"
                                 "<target>/<engine>/<namespace>/<name>/.");
        app->add_option("--src", o.src, "Source tree to scan")->capture_default_str();
        app->add_option("--target", o.target, "Output root")->capture_default_str();
        app->add_option("--engine", o.engines, "Restrict to an engine (repeatable); default: all declared");
        app->add_option("--parallel", o.parallel, "Concurrent builds")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_flag("--setup", o.setup, "Also build container images");
        app->add_option("--format", o.format, "human or machine")->capture_default_str();
        return app;
    }
    if (sub == "ns-test") {
        auto app = make_app(sub, "Run the unit tests of every component under a source tree.");
        app->add_option("--src", o.src, "Source tree to scan")->capture_default_str();
        app->add_option("--parallel", o.parallel, "Components tested concurrently")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_option("--engine", o.engine, "native or container")->capture_default_str();
        app->add_option("--format", o.format, "human or machine")->capture_default_str();
        return app;
    }
    if (sub == "ns-list") {
        auto app = make_app(sub, "List the components under a source tree.");
        app->add_option("--src", o.src, "Source tree to scan")->capture_default_str();
        app->add_option("--format", o.format, "human or machine (YAML stream)")->capture_default_str();
        return app;
    }
    if (sub == "version") {
        return make_app(sub, "Print the tool version.");
    }
    auto app = make_app("help", "Show help for compkit or one of its subcommands.");
    app->add_option("subcommand", o.config, "Subcommand to describe");
    return app;
}

std::string top_usage() {
    static const std::map<std::string, std::string> summaries{
        {"run", "build to a temporary directory and run the component"},
        {"build", "build a component into a directory"},
        {"test", "run a component's unit tests"},
        {"config-view", "print the normalized config"},
        {"ns-build", "build every component under a source tree"},
        {"ns-test", "test every component under a source tree"},
        {"ns-list", "list components under a source tree"},
        {"version", "print the tool version"},
        {"help", "show help for a subcommand"},
    };
    std::string out = tool_line() + "\n\nUsage: compkit <subcommand> [options]\n\nSubcommands:\n";
    for (const auto& sub : subcommand_order()) {
        std::string name = sub;
        name.resize(13, ' ');
        out += "  " + name + summaries.at(sub) + "\n";
    }
    out += "\nRun 'compkit help <subcommand>' or 'compkit <subcommand> --help' for details.\n";
    return out;
}

bool known(const std::string& sub) {
    const auto& order = subcommand_order();
    return std::find(order.begin(), order.end(), sub) != order.end();
}

int execute(const std::string& sub, const Options& o, const std::vector<std::string>& passthrough,
            std::ostream& out, std::ostream& err) {
    if (sub == "version") {
        out << tool_line() << "\n";
        return exit_ok;
    }
    if (sub == "help") {
        if (o.config.empty()) {
            out << top_usage();
            return exit_ok;
        }
        if (!known(o.config)) {
            err << "error: unknown subcommand '" << o.config << "'\n" << top_usage();
            return exit_parse_error;
        }
        Options scratch;
        out << app_for(o.config, scratch)->help();
        return exit_ok;
    }
    if (sub == "config-view") {
        auto cfg = load_config(fs::absolute(o.config));
        for (const auto& w : cfg.warnings) {
            err << "warning: " << w << "\n";
        }
        for (const auto& d : validate_config(cfg)) {
            err << (d.severity == Severity::error ? "error: " : "warning: ") << d.message << "\n";
        }
        out << view_config(cfg);
        return exit_ok;
    }
    if (sub == "build") {
        auto cfg = load_checked(o.config, err);
        auto artifact = build_component(cfg, parse_engine(o.engine), o.output);
        err << "built " << artifact.entry_path.string() << "\n";
        return exit_ok;
    }
    if (sub == "run") {
        auto cfg = load_checked(o.config, err);
        auto engine = parse_engine(o.engine);
        if (engine == EngineKind::workflow) {
            throw UsageError("the workflow engine cannot be run directly; use build");
        }
        auto dir = make_temp_dir("compkit-run");
        int code = 0;
        try {
            auto artifact = build_component(cfg, engine, dir / "build");
            std::vector<std::string> argv{artifact.entry_path.string()};
            argv.insert(argv.end(), passthrough.begin(), passthrough.end());
            out.flush();
            err.flush();
            std::cout.flush();
            code = run_foreground(argv);
        } catch (...) {
            std::error_code ec;
            fs::remove_all(dir, ec);
            throw;
        }
        if (debug_enabled()) {
            err << "compkit: keeping " << dir.string() << "\n";
        } else {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
        return code;
    }
    if (sub == "test") {
        auto style = parse_style(o.format);
        auto cfg = load_checked(o.config, err);
        auto report = run_tests(cfg, parse_engine(o.engine));
        out << format_report(report, style);
        return report.summary.ok() ? exit_ok : exit_user_error;
    }
    if (sub == "ns-build") {
        auto style = parse_style(o.format);
        BuildOptions options;
        for (const auto& e : o.engines) {
            options.engines.push_back(parse_engine(e));
        }
        options.parallel = o.parallel;
        options.setup = o.setup;
        auto report = ns_build(o.src, o.target, options);
        out << format_batch_report(report, style);
        return report.success() ? exit_ok : exit_user_error;
    }
    if (sub == "ns-test") {
        auto style = parse_style(o.format);
        auto report = ns_test(o.src, o.parallel, parse_engine(o.engine));
        out << format_aggregate_report(report, style);
        return report.success() ? exit_ok : exit_user_error;
    }
    if (sub == "ns-list") {
        out << ns_list(o.src, parse_style(o.format));
        return exit_ok;
    }
    err << "error: unknown subcommand '" << sub << "'\n";
    return exit_parse_error;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << "error: missing subcommand\n" << top_usage();
        return exit_parse_error;
    }
    const auto& first = args.front();
    if (first == "--version") {
        out << tool_line() << "\n";
        return exit_ok;
    }
    if (first == "--help" || first == "-h") {
        out << top_usage();
        return exit_ok;
    }
    if (!known(first)) {
        err << "error: unknown subcommand '" << first << "'\n" << top_usage();
        return exit_parse_error;
    }

    std::vector<std::string> rest(args.begin() + 1, args.end());
    std::vector<std::string> passthrough;
    if (auto sep = std::find(rest.begin(), rest.end(), "--"); sep != rest.end()) {
        if (first != "run") {
            err << "error: '--' is only accepted by run\n";
            return exit_user_error;
        }
        passthrough.assign(sep + 1, rest.end());
        rest.erase(sep, rest.end());
    }

    Options options;
    auto app = app_for(first, options);
    if (int code = parse_app(*app, rest, out, err); code >= 0) {
        return code;
    }
    try {
        return execute(first, options, passthrough, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_parse_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_user_error;
    }
}

}  // namespace compkit
