#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace compkit {

/// Base for every error raised by the library. `what()` is a single line
/// suitable for `error: <what>` reporting.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t line = 0, std::size_t column = 0);

    /// 1-based; 0 when the error is not tied to a source position.
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ResourceError : public Error {
public:
    explicit ResourceError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

class CoerceError : public Error {
public:
    CoerceError(std::string token, std::string expected);
    const std::string& token() const noexcept { return token_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::string token_;
    std::string expected_;
};

/// Command-line misuse. `argument()` names the flag at fault, if any.
class UsageError : public Error {
public:
    UsageError(std::string message, std::string argument = {});
    const std::string& argument() const noexcept { return argument_; }

private:
    std::string argument_;
};

class InjectError : public Error {
public:
    using Error::Error;
};

class GenerateError : public Error {
public:
    using Error::Error;
};

class UnsupportedManager : public Error {
public:
    explicit UnsupportedManager(const std::string& manager);
};

class BuildError : public Error {
public:
    using Error::Error;
};

}  // namespace compkit
