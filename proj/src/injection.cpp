#include "compkit/injection.hpp"

#include "compkit/arguments.hpp"
#include "compkit/errors.hpp"

#include <limits>
#include <optional>

namespace compkit {

std::string_view comment_token(Language language) {
    return language == Language::javascript ? "//" : "#";
}

std::string start_marker(Language language) {
    return std::string(comment_token(language)) + " COMPKIT START";
}

std::string end_marker(Language language) {
    return std::string(comment_token(language)) + " COMPKIT END";
}

namespace {

std::string escape_c_like(std::string_view text, char quote) {
    std::string out;
    out.reserve(text.size() + 2);
    out += quote;
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c == quote) {
                    out += '\\';
                }
                out += c;
        }
    }
    out += quote;
    return out;
}

std::string bash_word(std::string_view text) {
    std::string out = "'";
    for (char c : text) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

constexpr std::int64_t r_int_max = std::numeric_limits<std::int32_t>::max();

}  // namespace

std::string quote_string(Language language, std::string_view text) {
    switch (language) {
        case Language::bash: return bash_word(text);
        case Language::python:
        case Language::javascript: return escape_c_like(text, '\'');
        case Language::r: return escape_c_like(text, '"');
    }
    return bash_word(text);
}

std::string scalar_literal(Language language, const Scalar& value) {
    if (const auto* s = std::get_if<std::string>(&value)) {
        return quote_string(language, *s);
    }
    if (const auto* b = std::get_if<bool>(&value)) {
        switch (language) {
            case Language::bash: return *b ? "\"true\"" : "\"false\"";
            case Language::python: return *b ? "True" : "False";
            case Language::r: return *b ? "TRUE" : "FALSE";
            case Language::javascript: return *b ? "true" : "false";
        }
    }
    auto text = scalar_text(value);
    if (language == Language::bash) {
        return "\"" + text + "\"";
    }
    if (const auto* i = std::get_if<std::int64_t>(&value); i != nullptr && language == Language::r) {
        // R integers are 32-bit and NA_integer_ takes the minimum.
        if (*i >= -r_int_max && *i <= r_int_max) {
            return text + "L";
        }
    }
    return text;
}

namespace {

std::string null_literal(Language language) {
    switch (language) {
        case Language::python: return "None";
        case Language::r: return "NULL";
        default: return "null";
    }
}

std::string value_literal(Language language, const ParamValue& value) {
    if (std::holds_alternative<std::monostate>(value)) {
        return null_literal(language);
    }
    if (const auto* one = std::get_if<Scalar>(&value)) {
        return scalar_literal(language, *one);
    }
    const auto& many = std::get<std::vector<Scalar>>(value);
    std::string items;
    std::string sep = language == Language::bash ? " " : ", ";
    for (std::size_t i = 0; i < many.size(); ++i) {
        if (i > 0) {
            items += sep;
        }
        items += scalar_literal(language, many[i]);
    }
    switch (language) {
        case Language::bash: return "(" + items + ")";
        case Language::r: return "c(" + items + ")";
        default: return "[" + items + "]";
    }
}

using Entries = std::vector<std::pair<std::string, ParamValue>>;

std::string mapping(Language language, const std::string& var, const Entries& entries) {
    std::string out;
    switch (language) {
        case Language::bash:
            for (const auto& [key, value] : entries) {
                if (std::holds_alternative<std::monostate>(value)) {
                    out += "unset " + var + "_" + key + "\n";
                } else {
                    out += var + "_" + key + "=" + value_literal(language, value) + "\n";
                }
            }
            return out;
        case Language::python:
        case Language::javascript: {
            out = (language == Language::python ? "" : "const ") + var + " = {\n";
            for (const auto& [key, value] : entries) {
                out += "    " + quote_string(language, key) + ": " + value_literal(language, value) + ",\n";
            }
            out += language == Language::python ? "}\n" : "};\n";
            return out;
        }
        case Language::r: {
            out = var + " <- list(\n";
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const auto& [key, value] = entries[i];
                out += "  " + quote_string(language, key) + " = " + value_literal(language, value);
                out += i + 1 < entries.size() ? ",\n" : "\n";
            }
            out += ")\n";
            return out;
        }
    }
    return out;
}

}  // namespace

std::string serialize_params(Language language, const ParamMap& params, const MetaMap& meta) {
    Entries par(params.begin(), params.end());
    Entries m;
    for (const auto& [key, value] : meta) {
        m.emplace_back(key, Scalar{value});
    }
    return mapping(language, "par", par) + mapping(language, "meta", m);
}

namespace {

struct Line {
    std::size_t begin;
    std::size_t end;  // one past the newline, or text size
};

bool is_marker(std::string_view line, std::string_view token, std::string_view word) {
    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return false;
    }
    line.remove_prefix(first);
    return line.starts_with(token) && line.find(word) != std::string_view::npos;
}

}  // namespace

ScriptSplit split_for_injection(std::string_view script, Language language) {
    auto token = comment_token(language);
    std::optional<Line> start;
    std::optional<Line> end;
    std::size_t pos = 0;
    while (pos < script.size()) {
        auto nl = script.find('\n', pos);
        Line line{pos, nl == std::string_view::npos ? script.size() : nl + 1};
        auto content = script.substr(line.begin, line.end - line.begin);
        if (is_marker(content, token, "COMPKIT START")) {
            if (start) {
                throw InjectError("more than one COMPKIT START marker");
            }
            if (end) {
                throw InjectError("COMPKIT END marker appears before COMPKIT START");
            }
            start = line;
        } else if (is_marker(content, token, "COMPKIT END")) {
            if (!start) {
                throw InjectError("COMPKIT END marker appears before COMPKIT START");
            }
            if (end) {
                throw InjectError("more than one COMPKIT END marker");
            }
            end = line;
        }
        pos = line.end;
    }
    if (start && !end) {
        throw InjectError("COMPKIT START marker without matching COMPKIT END");
    }
    if (start) {
        return {std::string(script.substr(0, start->end)), std::string(script.substr(end->begin))};
    }
    if (script.starts_with("#!")) {
        auto nl = script.find('\n');
        if (nl == std::string_view::npos) {
            return {std::string(script) + "\n", {}};
        }
        return {std::string(script.substr(0, nl + 1)), std::string(script.substr(nl + 1))};
    }
    return {{}, std::string(script)};
}

std::string inject(std::string_view script, Language language, std::string_view block) {
    auto parts = split_for_injection(script, language);
    std::string out = parts.head;
    out += block;
    out += parts.tail;
    return out;
}

}  // namespace compkit
