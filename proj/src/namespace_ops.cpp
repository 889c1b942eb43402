#include "compkit/namespace_ops.hpp"

#include "compkit/build.hpp"
#include "compkit/container.hpp"
#include "compkit/errors.hpp"
#include "compkit/process.hpp"
#include "compkit/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

namespace compkit {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view config_suffix = ".comp.yaml";

std::string stem_of(const fs::path& config_path) {
    auto file = config_path.filename().string();
    return file.substr(0, file.size() - config_suffix.size());
}

// Runs job(i) for i in [0, count) on at most `parallel` threads.
void run_pool(std::size_t count, unsigned parallel, const std::function<void(std::size_t)>& job) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < count; i = next++) {
            job(i);
        }
    };
    auto threads = std::min<std::size_t>(std::max(parallel, 1u), count);
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
}

std::string first_error(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::error) {
            return d.message;
        }
    }
    return {};
}

fs::path target_dir(const fs::path& root, std::string_view engine, const std::string& ns,
                    const std::string& name) {
    auto dir = root / engine;
    if (!ns.empty()) {
        dir /= ns;
    }
    return dir / name;
}

}  // namespace

std::string NamespaceEntry::qualified_name() const {
    return namespace_path.empty() ? name : namespace_path + "/" + name;
}

std::string derive_namespace(const fs::path& src_root, const fs::path& config_path, const std::string& name) {
    auto rel = config_path.parent_path().lexically_relative(src_root);
    std::vector<std::string> segments;
    for (const auto& part : rel) {
        auto s = part.string();
        if (!s.empty() && s != ".") {
            segments.push_back(s);
        }
    }
    if (!segments.empty() && segments.back() == name) {
        segments.pop_back();
    }
    return join(segments, "/");
}

std::vector<NamespaceEntry> scan(const fs::path& src_root) {
    std::error_code ec;
    if (!fs::is_directory(src_root, ec)) {
        throw Error("cannot read source directory " + src_root.string());
    }
    auto root = fs::absolute(src_root).lexically_normal();
    std::vector<fs::path> found;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) {
        throw Error("cannot read source directory " + src_root.string() + ": " + ec.message());
    }
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) {
            break;
        }
        auto file = it->path().filename().string();
        if (it->is_regular_file(ec) && file.size() > config_suffix.size() && file.ends_with(config_suffix)) {
            found.push_back(it->path());
        }
    }

    std::vector<NamespaceEntry> entries;
    for (const auto& path : found) {
        NamespaceEntry entry;
        entry.config_path = path;
        try {
            auto cfg = load_config(path);
            if (!cfg.namespace_path) {
                auto ns = derive_namespace(root, path, cfg.name);
                if (!ns.empty()) {
                    cfg.namespace_path = ns;
                }
            }
            entry.name = cfg.name;
            entry.namespace_path = cfg.namespace_path.value_or("");
            entry.diagnostics = validate_config(cfg);
            entry.config = std::move(cfg);
        } catch (const std::exception& e) {
            entry.name = stem_of(path);
            entry.namespace_path = derive_namespace(root, path, entry.name);
            entry.diagnostics.push_back({Severity::error, e.what()});
        }
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::tie(a.namespace_path, a.name, a.config_path) <
               std::tie(b.namespace_path, b.name, b.config_path);
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        auto& prev = entries[i - 1];
        auto& cur = entries[i];
        if (prev.namespace_path == cur.namespace_path && prev.name == cur.name) {
            cur.diagnostics.push_back({Severity::error, "duplicate component " + cur.qualified_name() +
                                                            " (also defined in " +
                                                            prev.config_path.string() + ")"});
        }
    }
    return entries;
}

BatchReport ns_build(const fs::path& src_root, const fs::path& target_root, const BuildOptions& options) {
    auto entries = scan(src_root);
    auto target = fs::absolute(target_root).lexically_normal();

    struct Job {
        const NamespaceEntry* entry;
        std::optional<EngineKind> engine;
    };
    std::vector<Job> jobs;
    for (const auto& entry : entries) {
        if (!entry.ok()) {
            jobs.push_back({&entry, std::nullopt});
            continue;
        }
        for (const auto& spec : entry.config->engines) {
            bool selected = options.engines.empty() ||
                            std::find(options.engines.begin(), options.engines.end(), spec.kind) !=
                                options.engines.end();
            if (selected) {
                jobs.push_back({&entry, spec.kind});
            }
        }
    }

    // One lock per image so concurrent components never build the same tag at once.
    std::map<std::string, std::unique_ptr<std::mutex>> image_locks;
    for (const auto& job : jobs) {
        if (job.engine == EngineKind::container) {
            image_locks.try_emplace(image_ref(*job.entry->config).str(), std::make_unique<std::mutex>());
        }
    }

    std::vector<BatchItem> items(jobs.size());
    run_pool(jobs.size(), options.parallel, [&](std::size_t i) {
        const auto& job = jobs[i];
        auto& item = items[i];
        item.namespace_path = job.entry->namespace_path;
        item.name = job.entry->name;
        if (!job.engine) {
            item.status = BatchStatus::failed;
            item.message = "invalid config: " + first_error(job.entry->diagnostics);
            return;
        }
        item.engine = std::string(to_string(*job.engine));
        auto out_dir = target_dir(target, item.engine, item.namespace_path, item.name);
        try {
            auto artifact = build_component(*job.entry->config, *job.engine, out_dir);
            item.output_dir = artifact.output_dir;
            if (options.setup && *job.engine == EngineKind::container) {
                auto ref = image_ref(*job.entry->config).str();
                std::lock_guard lock(*image_locks.at(ref));
                auto result = run_process({artifact.entry_path.string(), "---setup"});
                if (result.exit_code != 0) {
                    throw BuildError("image build for " + ref + " failed: " + result.err);
                }
            }
        } catch (const std::exception& e) {
            item.status = BatchStatus::failed;
            item.message = e.what();
        }
    });

    BatchReport report;
    report.items = std::move(items);
    // Items are grouped per component (jobs follow scan order).
    for (std::size_t i = 0; i < report.items.size();) {
        bool failed = false;
        std::size_t j = i;
        for (; j < report.items.size() && jobs[j].entry == jobs[i].entry; ++j) {
            failed = failed || report.items[j].status == BatchStatus::failed;
        }
        (failed ? report.failed : report.ok)++;
        i = j;
    }
    return report;
}

AggregateReport ns_test(const fs::path& src_root, unsigned parallel, EngineKind engine) {
    auto entries = scan(src_root);
    std::vector<ComponentTestRow> rows(entries.size());
    run_pool(entries.size(), parallel, [&](std::size_t i) {
        const auto& entry = entries[i];
        auto& row = rows[i];
        row.namespace_path = entry.namespace_path;
        row.name = entry.name;
        if (!entry.ok()) {
            row.message = "invalid config: " + first_error(entry.diagnostics);
            return;
        }
        row.report = run_tests(*entry.config, engine);
    });

    AggregateReport out;
    out.rows = std::move(rows);
    for (const auto& row : out.rows) {
        if (!row.report) {
            ++out.components_errored;
            ++out.totals.errored;
            continue;
        }
        out.totals.passed += row.report->summary.passed;
        out.totals.failed += row.report->summary.failed;
        out.totals.errored += row.report->summary.errored;
    }
    return out;
}

namespace {

using nlohmann::ordered_json;

std::string table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()));
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += row[c];
            if (c + 1 < row.size()) {
                line.append(widths[c] - row[c].size() + 2, ' ');
            }
        }
        line.erase(line.find_last_not_of(' ') + 1);
        out += line + "\n";
    }
    return out;
}

std::string or_dash(const std::string& s) { return s.empty() ? "-" : s; }

}  // namespace

std::string format_batch_report(const BatchReport& report, ReportStyle style) {
    std::string out;
    if (style == ReportStyle::machine) {
        for (const auto& item : report.items) {
            ordered_json rec;
            rec["record"] = "build";
            rec["namespace"] = item.namespace_path;
            rec["name"] = item.name;
            rec["engine"] = item.engine;
            rec["status"] = item.status == BatchStatus::ok ? "ok" : "failed";
            rec["message"] = item.message;
            rec["output_dir"] = item.output_dir.string();
            out += rec.dump() + "\n";
        }
        ordered_json sum;
        sum["record"] = "summary";
        sum["components_ok"] = report.ok;
        sum["components_failed"] = report.failed;
        return out + sum.dump() + "\n";
    }
    std::vector<std::vector<std::string>> rows{{"NAMESPACE", "NAME", "ENGINE", "STATUS", "MESSAGE"}};
    for (const auto& item : report.items) {
        rows.push_back({or_dash(item.namespace_path), item.name, or_dash(item.engine),
                        item.status == BatchStatus::ok ? "ok" : "FAILED", item.message});
    }
    out = table(rows);
    return out + std::to_string(report.ok) + " ok, " + std::to_string(report.failed) + " failed\n";
}

std::string format_aggregate_report(const AggregateReport& report, ReportStyle style) {
    std::string out;
    auto totals_line = std::to_string(report.totals.passed) + " passed, " +
                       std::to_string(report.totals.failed) + " failed, " +
                       std::to_string(report.totals.errored) + " errored";
    if (style == ReportStyle::machine) {
        for (const auto& row : report.rows) {
            ordered_json rec;
            rec["record"] = "component";
            rec["namespace"] = row.namespace_path;
            rec["name"] = row.name;
            if (row.report) {
                rec["passed"] = row.report->summary.passed;
                rec["failed"] = row.report->summary.failed;
                rec["errored"] = row.report->summary.errored;
                rec["no_tests"] = row.report->no_tests;
            } else {
                rec["passed"] = 0;
                rec["failed"] = 0;
                rec["errored"] = 1;
                rec["message"] = row.message;
            }
            out += rec.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
        }
        ordered_json sum;
        sum["record"] = "summary";
        sum["passed"] = report.totals.passed;
        sum["failed"] = report.totals.failed;
        sum["errored"] = report.totals.errored;
        sum["components"] = report.rows.size();
        sum["components_errored"] = report.components_errored;
        return out + sum.dump() + "\n";
    }
    std::vector<std::vector<std::string>> rows{{"NAMESPACE", "NAME", "PASSED", "FAILED", "ERRORED", "NOTE"}};
    for (const auto& row : report.rows) {
        if (row.report) {
            const auto& s = row.report->summary;
            rows.push_back({or_dash(row.namespace_path), row.name, std::to_string(s.passed),
                            std::to_string(s.failed), std::to_string(s.errored),
                            row.report->no_tests ? "no tests" : ""});
        } else {
            rows.push_back({or_dash(row.namespace_path), row.name, "0", "0", "1", row.message});
        }
    }
    out = table(rows);
    for (const auto& row : report.rows) {
        if (!row.report) {
            continue;
        }
        for (const auto& c : row.report->cases) {
            if (c.status == TestStatus::pass) {
                continue;
            }
            auto qualified = row.namespace_path.empty() ? row.name : row.namespace_path + "/" + row.name;
            out += "\n--- " + qualified + " " + c.test_name + " (" + std::string(to_string(c.status)) + ")\n";
            out += c.captured_output;
            if (!c.captured_output.empty() && c.captured_output.back() != '\n') {
                out += '\n';
            }
        }
    }
    return out + "total: " + totals_line + "\n";
}

std::string ns_list(const fs::path& src_root, ReportStyle style) {
    auto entries = scan(src_root);
    std::string out;
    if (style == ReportStyle::machine) {
        bool first = true;
        for (const auto& entry : entries) {
            if (!entry.ok()) {
                continue;
            }
            if (!first) {
                out += "---\n";
            }
            first = false;
            out += view_config(*entry.config);
        }
        return out;
    }
    std::vector<std::vector<std::string>> rows{{"NAMESPACE", "NAME", "VERSION", "ENGINES", "STATUS"}};
    for (const auto& entry : entries) {
        std::string version = "-";
        std::string engines = "-";
        if (entry.config) {
            version = entry.config->version;
            std::vector<std::string> kinds;
            for (const auto& e : entry.config->engines) {
                kinds.emplace_back(to_string(e.kind));
            }
            engines = join(kinds, ",");
        }
        rows.push_back({or_dash(entry.namespace_path), entry.name, version, engines,
                        entry.ok() ? "ok" : "INVALID: " + first_error(entry.diagnostics)});
    }
    return table(rows);
}

}  // namespace compkit
