#include "compkit/errors.hpp"
#include "compkit/process.hpp"
#include "compkit/util.hpp"
#include "compkit/workflow.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace compkit;
using compkit::testing::count_occurrences;
using compkit::testing::fixture;
using compkit::testing::TempDir;

namespace fs = std::filesystem;

namespace {

std::string script_block(const std::string& text) {
    auto start = text.find("    script:\n");
    auto end = text.find("\"\"\"\n}", start);
    return text.substr(start, end - start);
}

}  // namespace

TEST(WorkflowModuleTest, TwoFileArgumentsWithContainer) {
    auto cfg = load_config(fixture("flow/flow.comp.yaml"));
    auto module = generate_workflow_module(cfg);
    const auto& text = module.module_text;
    EXPECT_EQ(module.process_name, "flow");
    ASSERT_TRUE(module.container_ref.has_value());
    EXPECT_EQ(module.container_ref->str(), "flow:2.0.0");

    EXPECT_TRUE(text.starts_with("// flow 2.0.0\n"));
    EXPECT_NE(text.find("process flow {"), std::string::npos);
    EXPECT_NE(text.find("container 'flow:2.0.0'"), std::string::npos);
    EXPECT_NE(text.find("tuple val(id), path(input), val(args)"), std::string::npos) << text;
    EXPECT_NE(text.find("tuple val(id), path(\"${id}.output.tsv\")"), std::string::npos) << text;
    EXPECT_NE(text.find("workflow flow_wf {"), std::string::npos);
    EXPECT_NE(text.find("cpus 2\n"), std::string::npos);
    EXPECT_NE(text.find("memory '4 GB'\n"), std::string::npos);
    EXPECT_TRUE(compkit::testing::delimiters_balanced(text));

    auto block = script_block(text);
    for (const auto& arg : cfg.arguments) {
        EXPECT_EQ(count_occurrences(block, "'" + arg.name + "'"), 1u) << arg.name;
    }
    EXPECT_NE(block.find("/opt/compkit/flow ${cli}"), std::string::npos);
    EXPECT_EQ(text, generate_workflow_module(cfg).module_text);
}

TEST(WorkflowModuleTest, WithoutContainerUsesModuleDir) {
    auto cfg = load_config(fixture("tree/src/alpha/shout/shout.comp.yaml"));
    auto module = generate_workflow_module(cfg);
    EXPECT_FALSE(module.container_ref.has_value());
    EXPECT_EQ(module.module_text.find("container "), std::string::npos);
    EXPECT_NE(module.module_text.find("${moduleDir}/shout ${cli}"), std::string::npos);
    EXPECT_NE(module.module_text.find("tuple val(id), val(args)"), std::string::npos);
    EXPECT_NE(module.module_text.find("output:\n    val(id)"), std::string::npos);
    EXPECT_TRUE(compkit::testing::delimiters_balanced(module.module_text));
}

TEST(WorkflowModuleTest, Errors) {
    EXPECT_THROW(generate_workflow_module(load_config(fixture("hello_bash/hello_bash.comp.yaml"))), GenerateError);
    auto cfg = load_config(fixture("flow/flow.comp.yaml"));
    cfg.arguments[0].name = "--id";
    EXPECT_THROW(generate_workflow_module(cfg), GenerateError);
}

TEST(WorkflowModuleTest, HostileValuesStayBalanced) {
    auto cfg = load_config(fixture("flow/flow.comp.yaml"));
    cfg.engines[2].directives["label"] = "it's {odd} \"x\" \\";
    cfg.version = "1.0'(";
    auto text = generate_workflow_module(cfg).module_text;
    EXPECT_TRUE(compkit::testing::delimiters_balanced(text)) << text;
}

TEST(WorkflowModuleTest, BalanceCheckerRejectsBrokenText) {
    EXPECT_FALSE(compkit::testing::delimiters_balanced("process x {\n"));
    EXPECT_FALSE(compkit::testing::delimiters_balanced("a('b)"));
    EXPECT_FALSE(compkit::testing::delimiters_balanced("[(])"));
    EXPECT_TRUE(compkit::testing::delimiters_balanced("a('}') // {\n"));
}

TEST(WorkflowBuild, WritesModuleBesideExecutable) {
    TempDir out;
    auto artifact = build_workflow(load_config(fixture("flow/flow.comp.yaml")), out.path());
    EXPECT_EQ(artifact.entry_path, out.path() / "main.nf");
    EXPECT_TRUE(fs::exists(out.path() / "flow"));
    EXPECT_TRUE(fs::exists(out.path() / "main.py"));
}

TEST(WorkflowBuild, EngineAcceptsModuleWhenEnabled) {
    const char* gate = std::getenv("COMPKIT_TEST_WORKFLOW");
    if (gate == nullptr || std::string(gate) != "1") GTEST_SKIP() << "set COMPKIT_TEST_WORKFLOW=1 to run nextflow";
    if (!compkit::testing::have_program("nextflow")) GTEST_SKIP() << "nextflow not installed";
    TempDir out;
    build_workflow(load_config(fixture("flow/flow.comp.yaml")), out.path());
    write_file(out.path() / "check.nf", "include { flow_wf } from './main.nf'\nworkflow { }\n");
    ProcessOptions options;
    options.cwd = out.path();
    auto result = run_process({"nextflow", "run", "check.nf", "-preview"}, options);
    EXPECT_EQ(result.exit_code, 0) << result.out << result.err;
}
