#include "compkit/harness.hpp"

#include "compkit/build.hpp"
#include "compkit/errors.hpp"
#include "compkit/process.hpp"
#include "compkit/util.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>

namespace compkit {

namespace fs = std::filesystem;

std::string_view to_string(TestStatus status) {
    switch (status) {
        case TestStatus::pass: return "pass";
        case TestStatus::fail: return "fail";
        case TestStatus::error: return "error";
    }
    return "error";
}

TestSummary tally(const std::vector<TestCase>& cases) {
    TestSummary s;
    for (const auto& c : cases) {
        switch (c.status) {
            case TestStatus::pass: ++s.passed; break;
            case TestStatus::fail: ++s.failed; break;
            case TestStatus::error: ++s.errored; break;
        }
    }
    return s;
}

namespace {

class ScratchDir {
public:
    ScratchDir() : path_(make_temp_dir("compkit-test")) {}
    ~ScratchDir() {
        if (debug_enabled()) {
            return;
        }
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

void stage(const ResolvedResource& res, const fs::path& dir) {
    auto target = dir / res.dest;
    if (const auto* source = std::get_if<fs::path>(&res.source)) {
        auto perms = fs::status(*source).permissions();
        write_file(target, read_file(*source), (perms & fs::perms::owner_exec) != fs::perms::none);
    } else {
        write_file(target, std::get<std::string>(res.source));
    }
}

}  // namespace

TestReport run_tests(const ComponentConfig& cfg, EngineKind engine) {
    TestReport report;
    report.component = cfg.name;
    report.engine = engine;

    ScratchDir scratch;
    if (debug_enabled()) {
        std::fprintf(stderr, "compkit: keeping %s\n", scratch.path().c_str());
    }
    auto build_dir = scratch.path() / "build";
    std::vector<ResolvedResource> tests;
    try {
        build_component(cfg, engine, build_dir);
        tests = resolve_test_resources(cfg);
    } catch (const std::exception& e) {
        report.cases.push_back({"build", TestStatus::error, 0, e.what()});
        report.summary = tally(report.cases);
        return report;
    }

    std::string path_var = build_dir.string();
    if (const char* old = std::getenv("PATH"); old != nullptr && *old != '\0') {
        path_var += ":" + std::string(old);
    }

    for (std::size_t i = 0; i < cfg.test_resources.size(); ++i) {
        const auto& res = cfg.test_resources[i];
        if (res.kind != ResourceKind::script || !res.language) {
            continue;
        }
        TestCase tc;
        tc.test_name = tests[i].dest.string();
        auto runtime = std::string(runtime_executable(*res.language));
        if (find_executable(runtime).empty()) {
            tc.status = TestStatus::error;
            tc.captured_output = "runtime '" + runtime + "' not found on PATH";
            report.cases.push_back(std::move(tc));
            continue;
        }
        auto work = scratch.path() / "tests" / std::to_string(i);
        auto started = std::chrono::steady_clock::now();
        try {
            for (const auto& sibling : tests) {
                stage(sibling, work);
            }
            ProcessOptions options;
            options.cwd = work;
            options.env["PATH"] = path_var;
            options.merge_stderr = true;
            auto result = run_process({runtime, tests[i].dest.string()}, options);
            tc.status = result.exit_code == 0 ? TestStatus::pass : TestStatus::fail;
            if (tc.status != TestStatus::pass) {
                tc.captured_output = std::move(result.out);
                if (tc.captured_output.empty()) {
                    tc.captured_output = "exit code " + std::to_string(result.exit_code);
                }
            }
        } catch (const std::exception& e) {
            tc.status = TestStatus::error;
            tc.captured_output = e.what();
        }
        tc.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
        report.cases.push_back(std::move(tc));
    }
    report.no_tests = report.cases.empty();
    report.summary = tally(report.cases);
    return report;
}

namespace {

std::string summary_line(const TestSummary& s) {
    return std::to_string(s.passed) + " passed, " + std::to_string(s.failed) + " failed, " +
           std::to_string(s.errored) + " errored";
}

std::string pad(std::string text, std::size_t width) {
    if (text.size() < width) {
        text.append(width - text.size(), ' ');
    }
    return text;
}

std::string human(const TestReport& report) {
    std::size_t width = 4;
    for (const auto& c : report.cases) {
        width = std::max(width, c.test_name.size());
    }
    std::string out = report.component + " (" + std::string(to_string(report.engine)) + ")\n";
    if (!report.cases.empty()) {
        out += pad("TEST", width) + "  STATUS  DURATION\n";
        for (const auto& c : report.cases) {
            out += pad(c.test_name, width) + "  " + pad(std::string(to_string(c.status)), 6) + "  " +
                   std::to_string(c.duration_ms) + " ms\n";
        }
    }
    for (const auto& c : report.cases) {
        if (c.status == TestStatus::pass) {
            continue;
        }
        out += "\n--- " + c.test_name + " (" + std::string(to_string(c.status)) + ")\n";
        out += c.captured_output;
        if (!c.captured_output.empty() && c.captured_output.back() != '\n') {
            out += '\n';
        }
    }
    if (report.no_tests) {
        out += "warning: " + report.component + " defines no tests\n";
    }
    out += summary_line(report.summary) + "\n";
    return out;
}

std::string machine(const TestReport& report) {
    using nlohmann::ordered_json;
    std::string out;
    for (const auto& c : report.cases) {
        ordered_json rec;
        rec["record"] = "case";
        rec["component"] = report.component;
        rec["engine"] = to_string(report.engine);
        rec["test"] = c.test_name;
        rec["status"] = to_string(c.status);
        rec["duration_ms"] = c.duration_ms;
        rec["output"] = c.captured_output;
        out += rec.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
    }
    ordered_json sum;
    sum["record"] = "summary";
    sum["component"] = report.component;
    sum["engine"] = to_string(report.engine);
    sum["passed"] = report.summary.passed;
    sum["failed"] = report.summary.failed;
    sum["errored"] = report.summary.errored;
    sum["no_tests"] = report.no_tests;
    out += sum.dump() + "\n";
    return out;
}

}  // namespace

std::string format_report(const TestReport& report, ReportStyle style) {
    return style == ReportStyle::human ? human(report) : machine(report);
}

}  // namespace compkit
