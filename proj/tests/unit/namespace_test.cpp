#include "compkit/errors.hpp"
#include "compkit/namespace_ops.hpp"
#include "compkit/util.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace compkit;
using compkit::testing::fixture;
using compkit::testing::TempDir;

namespace fs = std::filesystem;

namespace {

void write_component(const fs::path& dir, const std::string& name, const std::string& body = "echo ok") {
    write_file(dir / (name + ".comp.yaml"), "name: " + name + "\nresources:\n  - language: bash\n    text: \"" + body +
                                                "\"\ntest_resources:\n  - {language: bash, text: \"" + name +
                                                "\", dest: test.sh}\n");
}

std::vector<std::string> lines_of(const std::string& text) {
    auto lines = split(text, "\n");
    if (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    return lines;
}

}  // namespace

TEST(Scan, SortedEntries) {
    auto entries = scan(fixture("tree/src"));
    ASSERT_EQ(entries.size(), 3u);
    EXPECT_EQ(entries[0].qualified_name(), "alpha/greet");
    EXPECT_EQ(entries[1].qualified_name(), "alpha/shout");
    EXPECT_EQ(entries[2].qualified_name(), "beta/broken");
    for (const auto& e : entries) {
        EXPECT_TRUE(e.ok()) << e.qualified_name();
        EXPECT_EQ(e.config->namespace_path.value_or(""), e.namespace_path);
    }
    auto again = scan(fixture("tree/src"));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        EXPECT_EQ(entries[i].config_path, again[i].config_path);
    }
}

TEST(Scan, MalformedEntryDoesNotAbort) {
    TempDir root;
    write_component(root.path() / "ns" / "a", "a");
    write_component(root.path() / "ns" / "b", "b");
    write_file(root.path() / "ns" / "c" / "c.comp.yaml", "name: [unterminated\n");
    auto entries = scan(root.path());
    ASSERT_EQ(entries.size(), 3u);
    std::size_t ok = 0;
    for (const auto& e : entries) {
        ok += e.ok();
    }
    EXPECT_EQ(ok, 2u);
    EXPECT_EQ(entries[2].name, "c");
    EXPECT_FALSE(entries[2].ok());
    EXPECT_FALSE(entries[2].diagnostics.empty());
}

TEST(Scan, EmptyAndUnreadable) {
    TempDir root;
    EXPECT_TRUE(scan(root.path()).empty());
    EXPECT_THROW(scan(root.path() / "missing"), Error);
}

TEST(Scan, NamespaceDerivationAndDuplicates) {
    EXPECT_EQ(derive_namespace("/src", "/src/ns/sub/comp/comp.comp.yaml", "comp"), "ns/sub");
    EXPECT_EQ(derive_namespace("/src", "/src/ns/comp.comp.yaml", "comp"), "ns");
    EXPECT_EQ(derive_namespace("/src", "/src/comp.comp.yaml", "comp"), "");

    TempDir root;
    write_component(root.path() / "ns" / "dup", "dup");
    write_component(root.path() / "ns", "dup");
    auto entries = scan(root.path());
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_NE(entries[0].ok(), entries[1].ok());
}

TEST(NsBuild, KeepGoingReport) {
    TempDir target;
    BuildOptions options;
    options.engines = {EngineKind::native};
    auto report = ns_build(fixture("tree/src"), target.path(), options);
    EXPECT_EQ(report.ok, 2u);
    EXPECT_EQ(report.failed, 1u);
    EXPECT_FALSE(report.success());
    EXPECT_TRUE(fs::exists(target.path() / "native" / "alpha" / "greet" / "greet"));
    EXPECT_TRUE(fs::exists(target.path() / "native" / "alpha" / "shout" / "shout"));
    EXPECT_FALSE(fs::exists(target.path() / "native" / "beta" / "broken" / "broken"));
    EXPECT_NE(format_batch_report(report, ReportStyle::human).find("2 ok, 1 failed"), std::string::npos);
}

TEST(NsBuild, AllDeclaredEnginesAndDistinctDirectories) {
    TempDir target;
    auto report = ns_build(fixture("tree/src"), target.path(), {});
    EXPECT_TRUE(fs::exists(target.path() / "workflow" / "alpha" / "shout" / "main.nf"));
    std::set<fs::path> dirs;
    for (const auto& item : report.items) {
        if (item.status == BatchStatus::ok) {
            EXPECT_TRUE(dirs.insert(item.output_dir).second) << item.output_dir;
        }
    }
    EXPECT_EQ(dirs.size(), 3u);
}

TEST(NsBuild, ReportIndependentOfParallelism) {
    TempDir root;
    for (int i = 0; i < 8; ++i) {
        write_component(root.path() / ("ns" + std::to_string(i % 3)) / ("c" + std::to_string(i)),
                        "c" + std::to_string(i));
    }
    write_file(root.path() / "bad" / "bad.comp.yaml", "name: bad\nresources:\n  - {language: bash, path: nope.sh}\n");
    TempDir target;
    BuildOptions serial;
    BuildOptions wide;
    wide.parallel = 4;
    auto a = ns_build(root.path(), target.path(), serial);
    auto b = ns_build(root.path(), target.path(), wide);
    EXPECT_EQ(a.items, b.items);
    EXPECT_EQ(format_batch_report(a, ReportStyle::human), format_batch_report(b, ReportStyle::human));
    EXPECT_EQ(format_batch_report(a, ReportStyle::machine), format_batch_report(b, ReportStyle::machine));
}

TEST(NsTest, AggregateTotals) {
    auto report = ns_test(fixture("tree/src"), 2);
    ASSERT_EQ(report.rows.size(), 3u);
    EXPECT_EQ(report.totals.passed, 2u);
    EXPECT_EQ(report.totals.failed, 0u);
    EXPECT_EQ(report.totals.errored, 1u);
    EXPECT_FALSE(report.success());
    auto text = format_aggregate_report(report, ReportStyle::human);
    EXPECT_EQ(lines_of(text).back(), "total: 2 passed, 0 failed, 1 errored");
}

TEST(NsTest, AllPassingAndInvalidEntries) {
    TempDir root;
    write_component(root.path() / "ns" / "a", "a");
    write_component(root.path() / "ns" / "b", "b");
    auto good = ns_test(root.path(), 2);
    EXPECT_TRUE(good.success());
    EXPECT_EQ(good.totals.passed, 2u);

    write_component(root.path() / "ns" / "c", "c", "exit 1");
    EXPECT_FALSE(ns_test(root.path(), 2).success());

    write_file(root.path() / "zz" / "zz.comp.yaml", "name: ZZ\nresources:\n  - {language: bash, text: x}\n");
    auto with_invalid = ns_test(root.path(), 1);
    EXPECT_EQ(with_invalid.components_errored, 1u);
}

TEST(NsList, HumanAndMachine) {
    auto human = lines_of(ns_list(fixture("tree/src"), ReportStyle::human));
    ASSERT_EQ(human.size(), 4u);
    EXPECT_NE(human[2].find("native,workflow"), std::string::npos);

    auto entries = scan(fixture("tree/src"));
    auto machine = ns_list(fixture("tree/src"), ReportStyle::machine);
    std::vector<std::string> docs;
    std::string current;
    for (const auto& line : split(machine, "\n")) {
        if (line == "---") {
            docs.push_back(current);
            current.clear();
        } else {
            current += line + "\n";
        }
    }
    docs.push_back(current);
    ASSERT_EQ(docs.size(), entries.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto parsed = parse_config(docs[i], entries[i].config_path);
        EXPECT_TRUE(parsed.same_definition(*entries[i].config)) << docs[i];
    }

    TempDir root;
    write_component(root.path() / "ns" / "a", "a");
    write_file(root.path() / "ns" / "b" / "b.comp.yaml", "name: [oops\n");
    auto flagged = lines_of(ns_list(root.path(), ReportStyle::human));
    ASSERT_EQ(flagged.size(), 3u);
    EXPECT_NE(flagged[2].find("INVALID"), std::string::npos);
}
