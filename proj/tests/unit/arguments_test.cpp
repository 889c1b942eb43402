#include "compkit/arguments.hpp"
#include "compkit/errors.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace compkit;
using compkit::testing::TempDir;

namespace {

ArgumentSpec arg(std::string name, ArgumentType type) {
    ArgumentSpec spec;
    spec.name = std::move(name);
    spec.type = type;
    return spec;
}

ParseOutcome parse(const std::vector<ArgumentSpec>& specs, std::vector<std::string> argv) {
    return parse_args(specs, argv);
}

std::string usage_error(const std::vector<ArgumentSpec>& specs, std::vector<std::string> argv) {
    try {
        parse(specs, argv);
    } catch (const UsageError& e) {
        return e.what();
    }
    return "<no error>";
}

}  // namespace

TEST(Coerce, Integers) {
    EXPECT_EQ(std::get<std::int64_t>(coerce(ArgumentType::integer, "42")), 42);
    EXPECT_EQ(std::get<std::int64_t>(coerce(ArgumentType::integer, "-7")), -7);
    EXPECT_EQ(std::get<std::int64_t>(coerce(ArgumentType::integer, "+007")), 7);
    EXPECT_EQ(std::get<std::int64_t>(coerce(ArgumentType::integer, "-9223372036854775808")), INT64_MIN);
    for (const char* bad : {"4.5", "", "abc", "1e3", " 1", "9223372036854775808", "0x10", "--1"}) {
        EXPECT_THROW(coerce(ArgumentType::integer, bad), CoerceError) << bad;
    }
}

TEST(Coerce, Doubles) {
    EXPECT_DOUBLE_EQ(std::get<Real>(coerce(ArgumentType::real, "1e-3")).value, 0.001);
    EXPECT_EQ(std::get<Real>(coerce(ArgumentType::real, "1e-3")).literal, "1e-3");
    EXPECT_EQ(std::get<Real>(coerce(ArgumentType::real, "+00012.50")).literal, "12.50");
    EXPECT_EQ(std::get<Real>(coerce(ArgumentType::real, ".5")).literal, "0.5");
    EXPECT_EQ(std::get<Real>(coerce(ArgumentType::real, "5.")).literal, "5.0");
    EXPECT_EQ(std::get<Real>(coerce(ArgumentType::real, "3")).literal, "3.0");
    for (const char* bad : {"abc", "", ".", "1e", "nan", "inf", "1.2.3", "e5"}) {
        EXPECT_THROW(coerce(ArgumentType::real, bad), CoerceError) << bad;
    }
}

TEST(Coerce, Booleans) {
    EXPECT_TRUE(std::get<bool>(coerce(ArgumentType::boolean, "YES")));
    EXPECT_TRUE(std::get<bool>(coerce(ArgumentType::boolean, "True")));
    EXPECT_TRUE(std::get<bool>(coerce(ArgumentType::boolean, "1")));
    EXPECT_FALSE(std::get<bool>(coerce(ArgumentType::boolean, "no")));
    EXPECT_FALSE(std::get<bool>(coerce(ArgumentType::boolean, "FALSE")));
    EXPECT_FALSE(std::get<bool>(coerce(ArgumentType::boolean, "0")));
    EXPECT_THROW(coerce(ArgumentType::boolean, "maybe"), CoerceError);
    EXPECT_THROW(coerce(ArgumentType::boolean, "TRUE "), CoerceError);
}

TEST(Coerce, ErrorCarriesTokenAndType) {
    try {
        coerce(ArgumentType::integer, "4.5");
        FAIL();
    } catch (const CoerceError& e) {
        EXPECT_EQ(e.token(), "4.5");
        EXPECT_EQ(e.expected(), "integer");
    }
}

TEST(Coerce, StringsPassThrough) {
    std::string weird = "a 'b' \"c\" \\ \n\xf0\x9f\x98\x80";
    EXPECT_EQ(std::get<std::string>(coerce(ArgumentType::string, weird)), weird);
    EXPECT_EQ(std::get<std::string>(coerce(ArgumentType::file, weird)), weird);
}

TEST(Coerce, TotalOverArbitraryBytes) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> len(0, 12);
    for (int i = 0; i < 5000; ++i) {
        std::string token;
        for (int n = len(rng); n > 0; --n) {
            token += static_cast<char>(byte(rng));
        }
        for (auto type : {ArgumentType::integer, ArgumentType::real, ArgumentType::boolean, ArgumentType::string}) {
            try {
                coerce(type, token);
            } catch (const CoerceError&) {
            }
        }
    }
}

TEST(ParseArgs, RequiredFile) {
    auto input = arg("--input", ArgumentType::file);
    input.required = true;
    std::vector<ArgumentSpec> specs{input};
    auto out = parse(specs, {"--input", "data.txt"});
    ASSERT_EQ(out.kind, ParseOutcome::Kind::params);
    EXPECT_EQ(std::get<std::string>(std::get<Scalar>(*out.params.find("input"))), "data.txt");
    EXPECT_EQ(usage_error(specs, {}), "missing required argument --input");
}

TEST(ParseArgs, MultipleConcatenates) {
    auto xs = arg("--xs", ArgumentType::string);
    xs.multiple = true;
    std::vector<ArgumentSpec> specs{xs};
    auto out = parse(specs, {"--xs", "a:b", "--xs", "c"});
    const auto& list = std::get<std::vector<Scalar>>(*out.params.find("xs"));
    ASSERT_EQ(list.size(), 3u);
    EXPECT_EQ(std::get<std::string>(list[0]), "a");
    EXPECT_EQ(std::get<std::string>(list[1]), "b");
    EXPECT_EQ(std::get<std::string>(list[2]), "c");
}

TEST(ParseArgs, EqualsFormAlternativesAndSwitches) {
    auto n = arg("--count", ArgumentType::integer);
    n.alternatives = {"-c"};
    auto flag = arg("--flag", ArgumentType::boolean_true);
    std::vector<ArgumentSpec> specs{n, flag};
    auto out = parse(specs, {"-c=5", "--flag"});
    EXPECT_EQ(std::get<std::int64_t>(std::get<Scalar>(*out.params.find("count"))), 5);
    EXPECT_TRUE(std::get<bool>(std::get<Scalar>(*out.params.find("flag"))));
    out = parse(specs, {});
    EXPECT_TRUE(std::holds_alternative<std::monostate>(*out.params.find("count")));
    EXPECT_FALSE(std::get<bool>(std::get<Scalar>(*out.params.find("flag"))));
    EXPECT_EQ(usage_error(specs, {"--flag=yes"}), "argument --flag does not take a value");
    EXPECT_EQ(usage_error(specs, {"--count"}), "argument --count requires a value");
    EXPECT_EQ(usage_error(specs, {"--count", "abc"}), "invalid value 'abc' for --count: expected integer");
    EXPECT_EQ(usage_error(specs, {"--nope"}), "unknown argument --nope");
    EXPECT_EQ(usage_error(specs, {"stray"}), "unexpected argument 'stray'");
}

TEST(ParseArgs, DefaultsNeverOverrideExplicitValues) {
    auto n = arg("--count", ArgumentType::integer);
    n.default_value = std::vector<std::string>{"3"};
    std::vector<ArgumentSpec> specs{n};
    EXPECT_EQ(std::get<std::int64_t>(std::get<Scalar>(*parse(specs, {}).params.find("count"))), 3);
    EXPECT_EQ(std::get<std::int64_t>(std::get<Scalar>(*parse(specs, {"--count", "9"}).params.find("count"))), 9);
}

TEST(ParseArgs, RepeatedSingleFlagLastWinsWithWarning) {
    std::vector<ArgumentSpec> specs{arg("--name", ArgumentType::string)};
    auto out = parse(specs, {"--name", "a", "--name=b"});
    EXPECT_EQ(std::get<std::string>(std::get<Scalar>(*out.params.find("name"))), "b");
    ASSERT_EQ(out.warnings.size(), 1u);
    EXPECT_NE(out.warnings[0].find("--name"), std::string::npos);
}

TEST(ParseArgs, HelpAndVersionShortCircuit) {
    auto input = arg("--input", ArgumentType::file);
    input.required = true;
    std::vector<ArgumentSpec> specs{input};
    EXPECT_EQ(parse(specs, {"--help"}).kind, ParseOutcome::Kind::help);
    EXPECT_EQ(parse(specs, {"--version"}).kind, ParseOutcome::Kind::version);
}

TEST(CheckFiles, OnlyMustExistInputs) {
    TempDir dir;
    auto present = (dir.path() / "present.txt").string();
    std::FILE* f = std::fopen(present.c_str(), "w");
    std::fclose(f);
    auto missing = (dir.path() / "missing.txt").string();

    auto in = arg("--input", ArgumentType::file);
    in.must_exist = true;
    auto out = arg("--output", ArgumentType::file);
    out.direction = Direction::output;
    out.must_exist = true;
    std::vector<ArgumentSpec> specs{in, out};

    auto ok = parse(specs, {"--input", present, "--output", missing});
    EXPECT_TRUE(check_files(specs, ok.params).empty());
    auto bad = parse(specs, {"--input", missing});
    auto errors = check_files(specs, bad.params);
    ASSERT_EQ(errors.size(), 1u);
    EXPECT_EQ(errors[0], (FileError{"--input", missing}));
    EXPECT_NE(errors[0].message().find(missing), std::string::npos);
}

TEST(RenderHelp, FormatAndDeterminism) {
    auto cfg = load_config(compkit::testing::fixture("probe/probe.comp.yaml"));
    auto help = render_help(cfg);
    EXPECT_TRUE(help.starts_with("probe 1.2.3\n"));
    bool found = false;
    std::size_t pos = 0;
    while (pos < help.size()) {
        auto nl = help.find('\n', pos);
        auto line = help.substr(pos, nl - pos);
        if (line.find("--input") != std::string::npos && line.find("[required]") != std::string::npos) {
            found = true;
        }
        pos = nl + 1;
    }
    EXPECT_TRUE(found) << help;
    EXPECT_EQ(help, render_help(cfg));

    auto minimal = parse_config("name: hello\nresources:\n  - {language: bash, text: x}\n", "x.comp.yaml");
    EXPECT_NE(render_help(minimal).find("hello dev"), std::string::npos);
    EXPECT_EQ(version_line(minimal), "hello dev");
}
