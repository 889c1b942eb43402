#pragma once

#include "compkit/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace compkit {

enum class TestStatus { pass, fail, error };

std::string_view to_string(TestStatus status);

struct TestCase {
    std::string test_name;
    TestStatus status = TestStatus::pass;
    std::int64_t duration_ms = 0;
    /// Interleaved stdout/stderr; only kept for non-passing cases.
    std::string captured_output;
};

struct TestSummary {
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t errored = 0;

    bool ok() const { return failed == 0 && errored == 0; }
    bool operator==(const TestSummary&) const = default;
};

struct TestReport {
    std::string component;
    EngineKind engine = EngineKind::native;
    std::vector<TestCase> cases;
    TestSummary summary;
    /// Set when the config defines no tests.
    bool no_tests = false;
};

/// Builds `cfg` into a scratch directory and runs every script test
/// resource there. Never throws for build or test failures.
TestReport run_tests(const ComponentConfig& cfg, EngineKind engine = EngineKind::native);

enum class ReportStyle { human, machine };

std::string format_report(const TestReport& report, ReportStyle style);

TestSummary tally(const std::vector<TestCase>& cases);

}  // namespace compkit
