#pragma once

#include "compkit/config.hpp"
#include "compkit/harness.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace compkit {

struct NamespaceEntry {
    /// Declared namespace, else derived from the directory layout. May be empty.
    std::string namespace_path;
    std::string name;
    std::filesystem::path config_path;
    /// Present when the file parsed; namespace is filled in.
    std::optional<ComponentConfig> config;
    /// Errors make the entry invalid; warnings are informative.
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return config.has_value() && !has_errors(diagnostics); }
    /// `namespace/name`, or just `name` at the root.
    std::string qualified_name() const;
};

/// Every `*.comp.yaml` below `src_root`, sorted by (namespace, name).
/// Throws Error only when `src_root` cannot be read.
std::vector<NamespaceEntry> scan(const std::filesystem::path& src_root);

/// Namespace implied by a config's location: its directory relative to the
/// root, minus the last segment when that segment is the component name.
std::string derive_namespace(const std::filesystem::path& src_root,
                             const std::filesystem::path& config_path, const std::string& name);

enum class BatchStatus { ok, failed };

struct BatchItem {
    std::string namespace_path;
    std::string name;
    /// Empty for entries that never reached an engine (invalid config).
    std::string engine;
    BatchStatus status = BatchStatus::ok;
    std::string message;
    std::filesystem::path output_dir;

    bool operator==(const BatchItem&) const = default;
};

struct BatchReport {
    /// One item per (component, engine) build, in scan order.
    std::vector<BatchItem> items;
    /// Component counts; a component fails when any of its builds fails.
    std::size_t ok = 0;
    std::size_t failed = 0;

    bool success() const { return failed == 0; }
};

struct BuildOptions {
    /// Empty selects every engine each component declares.
    std::vector<EngineKind> engines;
    unsigned parallel = 1;
    /// Also build container images (`---setup`), one at a time per image.
    bool setup = false;
};

BatchReport ns_build(const std::filesystem::path& src_root, const std::filesystem::path& target_root,
                     const BuildOptions& options);

struct ComponentTestRow {
    std::string namespace_path;
    std::string name;
    std::optional<TestReport> report;
    /// Reason the component could not be tested (invalid config).
    std::string message;
};

struct AggregateReport {
    std::vector<ComponentTestRow> rows;
    TestSummary totals;
    std::size_t components_errored = 0;

    bool success() const { return totals.ok() && components_errored == 0; }
};

AggregateReport ns_test(const std::filesystem::path& src_root, unsigned parallel,
                        EngineKind engine = EngineKind::native);

std::string format_batch_report(const BatchReport& report, ReportStyle style);
std::string format_aggregate_report(const AggregateReport& report, ReportStyle style);

std::string ns_list(const std::filesystem::path& src_root, ReportStyle style);

}  // namespace compkit
