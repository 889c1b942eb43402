#pragma once

#include "compkit/argument_spec.hpp"
#include "compkit/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace compkit::testing {

std::filesystem::path fixture(std::string_view relative);
std::filesystem::path tool_path();

bool have_program(std::string_view program);

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

nlohmann::json to_json(const Scalar& value);
nlohmann::json to_json(const ParamMap& params);

// Random values that stress quoting: quotes, backslashes, newlines, unicode, empty.
std::string nasty_string(std::mt19937& rng);

// One random argv for the argument set of `cfg`. Values mix valid and invalid
// tokens; `existing` and `missing` are file paths handed out for file arguments.
std::vector<std::string> random_argv(std::mt19937& rng, const ComponentConfig& cfg,
                                     const std::string& existing, const std::string& missing);

struct OracleStats {
    int cases = 0;
    int params = 0;
    int usage_errors = 0;
    int file_errors = 0;
    int help_or_version = 0;
    std::vector<std::string> mismatches;
};

struct OracleOptions {
    int count = 200;
    std::uint32_t seed = 1;
    // Compare the kept injected script against inject(serialize_params(..)).
    bool check_injection = false;
    // Expect the script to print {"par":..,"meta":..} as JSON and compare it.
    bool compare_output = true;
    std::map<std::string, std::string> env;
};

// Runs random argv vectors through parse_args/check_files and through the
// native wrapper built in `build_dir`, recording every disagreement.
OracleStats run_oracle(const ComponentConfig& cfg, const std::filesystem::path& build_dir,
                       const OracleOptions& options);

// Words of a shell command line, as bash would split it.
std::vector<std::string> shell_words(const std::string& line);

// Brackets and quotes balance, ignoring comments and string contents.
bool delimiters_balanced(std::string_view groovy);

std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

}  // namespace compkit::testing
