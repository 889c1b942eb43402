#include "compkit/errors.hpp"


namespace compkit {

namespace {

std::string with_position(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) {
        return message;
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
        if (!out.empty()) {
            out += "; ";
        }
        out += p;
    }
    return out;
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t line, std::size_t column)
    : Error(with_position(message, line, column)), line_(line), column_(column) {}

ResourceError::ResourceError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

CoerceError::CoerceError(std::string token, std::string expected)
    : Error("invalid value '" + token + "': expected " + expected),
      token_(std::move(token)),
      expected_(std::move(expected)) {}

UsageError::UsageError(std::string message, std::string argument)
    : Error(std::move(message)), argument_(std::move(argument)) {}

UnsupportedManager::UnsupportedManager(const std::string& manager)
    : Error("unsupported setup manager '" + manager + "' (allowed: apt, apk, yum, pip, r)") {}

}  // namespace compkit
