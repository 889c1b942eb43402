#include "compkit/arguments.hpp"

#include "compkit/errors.hpp"
#include "compkit/util.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <limits>
#include <regex>

namespace compkit {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

std::int64_t coerce_integer(std::string_view raw) {
    std::string_view digits = raw;
    bool negative = false;
    if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (!all_digits(digits)) {
        throw CoerceError(std::string(raw), "integer");
    }
    std::string text = negative ? "-" + std::string(digits) : std::string(digits);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw CoerceError(std::string(raw), "integer");
    }
    return value;
}

// Canonical literal: no '+' sign, no leading zeros in the integer part,
// always a fractional part unless an exponent is present.
Real coerce_real(std::string_view raw) {
    static const std::regex pattern("([+-]?)([0-9]*)(\\.?)([0-9]*)([eE][+-]?[0-9]+)?");
    std::string text(raw);
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) {
        throw CoerceError(text, "double");
    }
    std::string sign = m[1].str() == "-" ? "-" : "";
    std::string whole = m[2].str();
    bool dot = m[3].matched && m[3].length() > 0;
    std::string frac = m[4].str();
    std::string exponent = m[5].matched ? m[5].str() : "";
    if (whole.empty() && frac.empty()) {
        throw CoerceError(text, "double");
    }
    if (!dot && !frac.empty()) {
        throw CoerceError(text, "double");
    }
    auto first = whole.find_first_not_of('0');
    whole = first == std::string::npos ? "0" : whole.substr(first);

    std::string literal = sign + whole;
    if (dot) {
        literal += "." + (frac.empty() ? std::string("0") : frac);
    } else if (exponent.empty()) {
        literal += ".0";
    }
    literal += exponent;

    double value = 0.0;
    auto [ptr, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value);
    if (ec == std::errc::result_out_of_range) {
        // Underflow rounds to zero, overflow to infinity, as in every target runtime.
        bool huge = !exponent.empty() && exponent.find('-') == std::string::npos;
        value = huge ? std::numeric_limits<double>::infinity() : 0.0;
        if (!sign.empty()) {
            value = -value;
        }
    } else if (ec != std::errc{}) {
        throw CoerceError(text, "double");
    }
    return Real{value, literal};
}

bool coerce_boolean(std::string_view raw) {
    auto lower = ascii_lower(raw);
    if (lower == "true" || lower == "yes" || lower == "1") {
        return true;
    }
    if (lower == "false" || lower == "no" || lower == "0") {
        return false;
    }
    throw CoerceError(std::string(raw), "boolean");
}

struct SlotState {
    bool seen = false;
    std::vector<Scalar> values;
};

Scalar coerce_for(const ArgumentSpec& spec, std::string_view raw) {
    try {
        return coerce(spec.type, raw);
    } catch (const CoerceError& e) {
        throw UsageError("invalid value '" + e.token() + "' for " + spec.name + ": expected " +
                             e.expected(),
                         spec.name);
    }
}

}  // namespace

Scalar coerce(ArgumentType type, std::string_view raw) {
    switch (type) {
        case ArgumentType::integer: return coerce_integer(raw);
        case ArgumentType::real: return coerce_real(raw);
        case ArgumentType::boolean:
        case ArgumentType::boolean_true: return coerce_boolean(raw);
        case ArgumentType::string:
        case ArgumentType::file: return std::string(raw);
    }
    return std::string(raw);
}

std::string scalar_text(const Scalar& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, Real>) {
                return v.literal;
            } else {
                return v;
            }
        },
        value);
}

ParseOutcome parse_args(std::span<const ArgumentSpec> specs, std::span<const std::string> argv) {
    ParseOutcome outcome;
    std::vector<SlotState> slots(specs.size());

    auto lookup = [&](std::string_view flag) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const auto& s = specs[i];
            if (s.name == flag ||
                std::find(s.alternatives.begin(), s.alternatives.end(), flag) != s.alternatives.end()) {
                return static_cast<std::ptrdiff_t>(i);
            }
        }
        return -1;
    };

    std::size_t pos = 0;
    while (pos < argv.size()) {
        const std::string& token = argv[pos++];
        if (token == "--help") {
            outcome.kind = ParseOutcome::Kind::help;
            return outcome;
        }
        if (token == "--version") {
            outcome.kind = ParseOutcome::Kind::version;
            return outcome;
        }
        if (token.empty() || token.front() != '-') {
            throw UsageError("unexpected argument '" + token + "'");
        }
        auto eq = token.find('=');
        std::string flag = token.substr(0, eq);
        auto index = lookup(flag);
        if (index < 0) {
            throw UsageError("unknown argument " + flag, flag);
        }
        const auto& spec = specs[static_cast<std::size_t>(index)];
        auto& slot = slots[static_cast<std::size_t>(index)];

        if (spec.type == ArgumentType::boolean_true) {
            if (eq != std::string::npos) {
                throw UsageError("argument " + spec.name + " does not take a value", spec.name);
            }
            if (slot.seen) {
                outcome.warnings.push_back("argument " + spec.name +
                                           " given more than once; using the last value");
            }
            slot.seen = true;
            slot.values = {Scalar{true}};
            continue;
        }

        std::string value;
        if (eq != std::string::npos) {
            value = token.substr(eq + 1);
        } else {
            if (pos >= argv.size()) {
                throw UsageError("argument " + spec.name + " requires a value", spec.name);
            }
            value = argv[pos++];
        }

        if (spec.multiple) {
            for (const auto& piece : split(value, spec.multiple_sep)) {
                slot.values.push_back(coerce_for(spec, piece));
            }
        } else {
            auto coerced = coerce_for(spec, value);
            if (slot.seen) {
                outcome.warnings.push_back("argument " + spec.name +
                                           " given more than once; using the last value");
            }
            slot.values = {std::move(coerced)};
        }
        slot.seen = true;
    }

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& spec = specs[i];
        auto& slot = slots[i];
        if (!slot.seen) {
            if (spec.required) {
                throw UsageError("missing required argument " + spec.name, spec.name);
            }
            if (spec.default_value && spec.type != ArgumentType::boolean_true) {
                for (const auto& raw : *spec.default_value) {
                    slot.values.push_back(coerce_for(spec, raw));
                }
                slot.seen = true;
            } else if (spec.type == ArgumentType::boolean_true) {
                slot.values = {Scalar{false}};
                slot.seen = true;
            }
        }
        if (!slot.seen) {
            outcome.params.set(spec.id(), std::monostate{});
        } else if (spec.multiple) {
            outcome.params.set(spec.id(), std::move(slot.values));
        } else {
            outcome.params.set(spec.id(), std::move(slot.values.front()));
        }
    }
    return outcome;
}

std::string FileError::message() const {
    return "file not found for " + argument + ": " + path;
}

std::vector<FileError> check_files(std::span<const ArgumentSpec> specs, const ParamMap& params) {
    std::vector<FileError> errors;
    for (const auto& spec : specs) {
        if (spec.type != ArgumentType::file || !spec.must_exist || spec.direction != Direction::input) {
            continue;
        }
        const auto* value = params.find(spec.id());
        if (value == nullptr) {
            continue;
        }
        auto check = [&](const Scalar& s) {
            const auto* path = std::get_if<std::string>(&s);
            std::error_code ec;
            if (path != nullptr && !std::filesystem::exists(*path, ec)) {
                errors.push_back({spec.name, *path});
            }
        };
        if (const auto* one = std::get_if<Scalar>(value)) {
            check(*one);
        } else if (const auto* many = std::get_if<std::vector<Scalar>>(value)) {
            for (const auto& s : *many) {
                check(s);
            }
        }
    }
    return errors;
}

namespace {

std::string one_line(std::string_view text) {
    std::string out;
    bool space = false;
    for (char c : text) {
        if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
            space = !out.empty();
            continue;
        }
        if (space) {
            out += ' ';
            space = false;
        }
        out += c;
    }
    return out;
}

}  // namespace

std::string render_help(const ComponentConfig& cfg) {
    std::string out = version_line(cfg) + "\n";
    auto description = cfg.description;
    while (!description.empty() && (description.back() == '\n' || description.back() == ' ')) {
        description.pop_back();
    }
    if (!description.empty()) {
        out += "\n" + description + "\n";
    }
    out += "\nUsage: " + cfg.name + " [arguments]\n";

    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& arg : cfg.arguments) {
        std::string flags = arg.name;
        for (const auto& alt : arg.alternatives) {
            flags += ", " + alt;
        }
        std::vector<std::string> parts;
        if (arg.type == ArgumentType::boolean_true) {
            parts.emplace_back("[flag]");
        } else {
            parts.push_back("<" + std::string(to_string(arg.type)) + ">");
        }
        if (arg.required) {
            parts.emplace_back("[required]");
        }
        if (arg.default_value && arg.type != ArgumentType::boolean_true) {
            parts.push_back("[default: " + one_line(join(*arg.default_value, arg.multiple_sep)) + "]");
        }
        if (arg.multiple) {
            parts.push_back("[multiple, sep '" + arg.multiple_sep + "']");
        }
        if (arg.type == ArgumentType::file) {
            if (arg.direction == Direction::output) {
                parts.emplace_back("[output]");
            } else if (arg.must_exist) {
                parts.emplace_back("[must exist]");
            }
        }
        auto desc = one_line(arg.description);
        if (!desc.empty()) {
            parts.push_back(desc);
        }
        rows.emplace_back(flags, join(parts, "  "));
    }
    rows.emplace_back("--help", "Show this help and exit.");
    rows.emplace_back("--version", "Print name and version and exit.");

    std::size_t width = 0;
    for (const auto& row : rows) {
        width = std::max(width, row.first.size());
    }
    if (!cfg.arguments.empty()) {
        out += "\nArguments:\n";
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == rows.size() - 2) {
            out += "\nOptions:\n";
        }
        const auto& [flags, detail] = rows[i];
        out += "  " + flags + std::string(width - flags.size() + 2, ' ') + detail + "\n";
    }
    return out;
}

std::string version_line(const ComponentConfig& cfg) {
    return cfg.name + " " + cfg.version;
}

}  // namespace compkit
