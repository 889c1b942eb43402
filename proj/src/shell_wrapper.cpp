#include "shell_wrapper.hpp"

#include "compkit/arguments.hpp"
#include "compkit/injection.hpp"
#include "compkit/util.hpp"
#include "compkit/version.hpp"

namespace compkit::detail {

namespace {

constexpr std::string_view helpers = R"BASH(
_ck_die() {
    printf 'error: %s\n' "$1" >&2
    exit 1
}

_ck_warn() {
    printf 'warning: %s\n' "$1" >&2
}

# Signed decimal within int64, canonicalized into _ck_out.
_ck_int() {
    local raw=$1 sign= digits
    case $raw in
        [+-]*) sign=${raw:0:1}; digits=${raw:1} ;;
        *) digits=$raw ;;
    esac
    [[ -n $digits && $digits != *[!0123456789]* ]] || return 1
    while [[ ${#digits} -gt 1 && $digits == 0* ]]; do
        digits=${digits#0}
    done
    (( ${#digits} <= 19 )) || return 1
    if (( ${#digits} == 19 )); then
        local head=$(( 10#${digits:0:18} )) last=${digits:18:1} limit=7
        [[ $sign == - ]] && limit=8
        (( head < 922337203685477580 || (head == 922337203685477580 && last <= limit) )) || return 1
    fi
    if [[ $sign == - ]]; then
        _ck_out=$(( -10#$digits ))
    else
        _ck_out=$(( 10#$digits ))
    fi
}

# Decimal or scientific notation, canonicalized into _ck_out.
_ck_real() {
    local re='^([+-]?)([0123456789]*)(\.?)([0123456789]*)([eE][+-]?[0123456789]+)?$'
    [[ $1 =~ $re ]] || return 1
    local sign=${BASH_REMATCH[1]} whole=${BASH_REMATCH[2]} dot=${BASH_REMATCH[3]}
    local frac=${BASH_REMATCH[4]} exp=${BASH_REMATCH[5]}
    [[ -n $whole || -n $frac ]] || return 1
    [[ $sign == - ]] || sign=
    while [[ $whole == 0* ]]; do
        whole=${whole#0}
    done
    whole=${whole:-0}
    if [[ -n $dot ]]; then
        _ck_out="$sign$whole.${frac:-0}$exp"
    elif [[ -n $exp ]]; then
        _ck_out="$sign$whole$exp"
    else
        _ck_out="$sign$whole.0"
    fi
}

# _ck_coerce TYPE FLAG RAW -> _ck_out
_ck_coerce() {
    case $1 in
        integer)
            _ck_int "$3" || _ck_die "invalid value '$3' for $2: expected integer" ;;
        double)
            _ck_real "$3" || _ck_die "invalid value '$3' for $2: expected double" ;;
        boolean|boolean_true)
            case $3 in
                [Tt][Rr][Uu][Ee]|[Yy][Ee][Ss]|1) _ck_out=true ;;
                [Ff][Aa][Ll][Ss][Ee]|[Nn][Oo]|0) _ck_out=false ;;
                *) _ck_die "invalid value '$3' for $2: expected boolean" ;;
            esac ;;
        *)
            _ck_out=$3 ;;
    esac
}

# Splits $1 on the single character $2 into _ck_parts, keeping empty fields.
_ck_split() {
    local rest=$1 sep=$2
    _ck_parts=()
    while [[ $rest == *"$sep"* ]]; do
        _ck_parts+=("${rest%%"$sep"*}")
        rest=${rest#*"$sep"}
    done
    _ck_parts+=("$rest")
}
)BASH";

constexpr std::string_view literal_helpers = R"BASH(
_ck_str_sh() {
    local q="'" r="'\\''"
    local s=${1//"$q"/"$r"}
    _ck_lit="'$s'"
}

_ck_str_c() {
    local s=$2 bs='\' q=$1 nl=$'\n' cr=$'\r'
    s=${s//"$bs"/"$bs$bs"}
    s=${s//"$q"/"$bs$q"}
    s=${s//"$nl"/"${bs}n"}
    s=${s//"$cr"/"${bs}r"}
    _ck_lit="$q$s$q"
}

# _ck_scalar LANG TYPE VALUE -> _ck_lit
_ck_scalar() {
    case $2 in
        string|file)
            case $1 in
                bash) _ck_str_sh "$3" ;;
                r) _ck_str_c '"' "$3" ;;
                *) _ck_str_c "'" "$3" ;;
            esac ;;
        boolean|boolean_true)
            case $1 in
                bash) _ck_lit="\"$3\"" ;;
                python) if [[ $3 == true ]]; then _ck_lit=True; else _ck_lit=False; fi ;;
                r) if [[ $3 == true ]]; then _ck_lit=TRUE; else _ck_lit=FALSE; fi ;;
                *) _ck_lit=$3 ;;
            esac ;;
        integer)
            case $1 in
                bash) _ck_lit="\"$3\"" ;;
                r) if (( $3 >= -2147483647 && $3 <= 2147483647 )); then _ck_lit="$3L"; else _ck_lit=$3; fi ;;
                *) _ck_lit=$3 ;;
            esac ;;
        *)
            if [[ $1 == bash ]]; then _ck_lit="\"$3\""; else _ck_lit=$3; fi ;;
    esac
}

# _ck_list LANG TYPE VALUES... -> _ck_lit
_ck_list() {
    local lang=$1 type=$2 out= sep=', ' v first=1
    shift 2
    [[ $lang == bash ]] && sep=' '
    for v in "$@"; do
        _ck_scalar "$lang" "$type" "$v"
        if (( first )); then out=$_ck_lit; first=0; else out+="$sep$_ck_lit"; fi
    done
    case $lang in
        bash) _ck_lit="($out)" ;;
        r) _ck_lit="c($out)" ;;
        *) _ck_lit="[$out]" ;;
    esac
}
)BASH";

std::string q(std::string_view text) { return shell_quote(text); }

std::string indent(int level) { return std::string(static_cast<std::size_t>(level) * 4, ' '); }

std::string flag_patterns(const ArgumentSpec& arg) {
    std::string out = q(arg.name);
    for (const auto& alt : arg.alternatives) {
        out += "|" + q(alt);
    }
    return out;
}

std::string type_word(const ArgumentSpec& arg) { return std::string(to_string(arg.type)); }

std::string repeat_warning(const ArgumentSpec& arg) {
    return q("argument " + arg.name + " given more than once; using the last value");
}

}  // namespace

std::string wrapper_prelude(const ComponentConfig& cfg) {
    std::string out = "#!/usr/bin/env bash\n";
    out += "# " + version_line(cfg) + "\n";
    out += "# Generated by " + std::string(tool_name) + " " + std::string(tool_version) +
           " from " + cfg.config_path.filename().string() + ". Do not edit.\n";
    out += "# Requires bash 4 or newer.\n\n";
    out += "_ck_name=" + q(cfg.name) + "\n";
    out += "_ck_version=" + q(cfg.version) + "\n";
    out += helpers;
    out += literal_helpers;
    out += "\n_ck_help() {\n    printf '%s' " + q(render_help(cfg)) + "\n}\n";
    return out;
}

std::string wrapper_parser(const ComponentConfig& cfg) {
    const auto& args = cfg.arguments;
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        auto n = std::to_string(i);
        out += "_ck_seen_" + n + "=0\n_ck_val_" + n + "=()\n";
    }

    out += "\n_ck_parse() {\n";
    out += "    local _ck_tok _ck_flag _ck_has _ck_arg\n";
    out += "    while (( $# > 0 )); do\n";
    out += "        _ck_tok=$1\n        shift\n";
    out += "        case $_ck_tok in\n";
    out += "            --help) _ck_help; exit 0 ;;\n";
    out += "            --version) printf '%s\\n' \"$_ck_name $_ck_version\"; exit 0 ;;\n";
    out += "        esac\n";
    out += "        if [[ $_ck_tok != -* ]]; then\n";
    out += "            _ck_die \"unexpected argument '$_ck_tok'\"\n";
    out += "        fi\n";
    out += "        _ck_flag=${_ck_tok%%=*}\n";
    out += "        _ck_has=0\n";
    out += "        if [[ $_ck_tok == *=* ]]; then\n";
    out += "            _ck_has=1\n            _ck_arg=${_ck_tok#*=}\n";
    out += "        fi\n";
    out += "        case $_ck_flag in\n";
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& arg = args[i];
        auto n = std::to_string(i);
        auto in = indent(4);
        out += indent(3) + flag_patterns(arg) + ")\n";
        if (arg.type == ArgumentType::boolean_true) {
            out += in + "if (( _ck_has )); then\n";
            out += in + "    _ck_die " + q("argument " + arg.name + " does not take a value") + "\n";
            out += in + "fi\n";
            out += in + "if (( _ck_seen_" + n + " )); then\n";
            out += in + "    _ck_warn " + repeat_warning(arg) + "\n";
            out += in + "fi\n";
            out += in + "_ck_val_" + n + "=(true)\n";
        } else {
            out += in + "if (( ! _ck_has )); then\n";
            out += in + "    (( $# > 0 )) || _ck_die " + q("argument " + arg.name + " requires a value") + "\n";
            out += in + "    _ck_arg=$1\n" + in + "    shift\n";
            out += in + "fi\n";
            if (arg.multiple) {
                out += in + "_ck_split \"$_ck_arg\" " + q(arg.multiple_sep) + "\n";
                out += in + "for _ck_piece in \"${_ck_parts[@]}\"; do\n";
                out += in + "    _ck_coerce " + type_word(arg) + " " + q(arg.name) + " \"$_ck_piece\"\n";
                out += in + "    _ck_val_" + n + "+=(\"$_ck_out\")\n";
                out += in + "done\n";
            } else {
                out += in + "_ck_coerce " + type_word(arg) + " " + q(arg.name) + " \"$_ck_arg\"\n";
                out += in + "if (( _ck_seen_" + n + " )); then\n";
                out += in + "    _ck_warn " + repeat_warning(arg) + "\n";
                out += in + "fi\n";
                out += in + "_ck_val_" + n + "=(\"$_ck_out\")\n";
            }
        }
        out += in + "_ck_seen_" + n + "=1\n";
        out += in + ";;\n";
    }
    out += "            *) _ck_die \"unknown argument $_ck_flag\" ;;\n";
    out += "        esac\n";
    out += "    done\n";
    out += "}\n";

    out += "\n_ck_finish() {\n";
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& arg = args[i];
        auto n = std::to_string(i);
        if (arg.required) {
            out += "    (( _ck_seen_" + n + " )) || _ck_die " +
                   q("missing required argument " + arg.name) + "\n";
        } else if (arg.type == ArgumentType::boolean_true) {
            out += "    if (( ! _ck_seen_" + n + " )); then\n";
            out += "        _ck_val_" + n + "=(false)\n        _ck_seen_" + n + "=1\n";
            out += "    fi\n";
        } else if (arg.default_value) {
            std::string words;
            for (const auto& raw : *arg.default_value) {
                words += " " + q(raw);
            }
            out += "    if (( ! _ck_seen_" + n + " )); then\n";
            out += "        for _ck_piece in" + words + "; do\n";
            out += "            _ck_coerce " + type_word(arg) + " " + q(arg.name) + " \"$_ck_piece\"\n";
            out += "            _ck_val_" + n + "+=(\"$_ck_out\")\n";
            out += "        done\n";
            out += "        _ck_seen_" + n + "=1\n";
            out += "    fi\n";
        }
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& arg = args[i];
        if (arg.type != ArgumentType::file || !arg.must_exist || arg.direction != Direction::input) {
            continue;
        }
        auto n = std::to_string(i);
        out += "    if (( _ck_seen_" + n + " )); then\n";
        out += "        for _ck_piece in \"${_ck_val_" + n + "[@]}\"; do\n";
        out += "            [[ -e $_ck_piece ]] || _ck_die \"file not found for " + arg.name +
               ": $_ck_piece\"\n";
        out += "        done\n";
        out += "    fi\n";
    }
    out += "    :\n}\n";
    return out;
}

std::string wrapper_serializer(const ComponentConfig& cfg, Language language) {
    auto lang = q(to_string(language));
    std::string out = "\n_ck_render_block() {\n";
    auto append = [&](std::string_view text) { out += "    _ck_buf+=" + q(text) + "\n"; };
    auto append_lit = [&](std::string_view before, std::string_view after) {
        out += "    _ck_buf+=" + q(before) + "\"$_ck_lit\"" + q(after) + "\n";
    };

    out += "    _ck_buf=\n";
    // Mirrors the `mapping` layout in injection.cpp for each language.
    auto open = [&](const std::string& var) {
        switch (language) {
            case Language::bash: break;
            case Language::python: append(var + " = {\n"); break;
            case Language::javascript: append("const " + var + " = {\n"); break;
            case Language::r: append(var + " <- list(\n"); break;
        }
    };
    auto close = [&]() {
        switch (language) {
            case Language::bash: break;
            case Language::python: append("}\n"); break;
            case Language::javascript: append("};\n"); break;
            case Language::r: append(")\n"); break;
        }
    };
    auto entry_prefix = [&](const std::string& var, const std::string& key) -> std::string {
        switch (language) {
            case Language::bash: return var + "_" + key + "=";
            case Language::r: return "  " + quote_string(language, key) + " = ";
            default: return "    " + quote_string(language, key) + ": ";
        }
    };
    auto entry_suffix = [&](bool last) -> std::string {
        switch (language) {
            case Language::bash: return "\n";
            case Language::r: return last ? "\n" : ",\n";
            default: return ",\n";
        }
    };
    std::string null_lit = language == Language::python ? "None"
                           : language == Language::r    ? "NULL"
                                                        : "null";

    open("par");
    const auto& args = cfg.arguments;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& arg = args[i];
        auto n = std::to_string(i);
        auto key = arg.id();
        bool last = i + 1 == args.size();
        out += "    if (( _ck_seen_" + n + " )); then\n";
        if (arg.multiple) {
            out += "        _ck_list " + lang + " " + type_word(arg) + " \"${_ck_val_" + n + "[@]}\"\n";
        } else {
            out += "        _ck_scalar " + lang + " " + type_word(arg) + " \"${_ck_val_" + n + "[0]}\"\n";
        }
        out += "    ";
        append_lit(entry_prefix("par", key), entry_suffix(last));
        out += "    else\n    ";
        if (language == Language::bash) {
            append("unset par_" + key + "\n");
        } else {
            append(entry_prefix("par", key) + null_lit + entry_suffix(last));
        }
        out += "    fi\n";
    }
    close();

    open("meta");
    std::vector<std::pair<std::string, std::string>> meta = {
        {"name", q(quote_string(language, cfg.name))},
        {"version", q(quote_string(language, cfg.version))},
        {"resources_dir", {}},
        {"executable", {}},
    };
    for (std::size_t i = 0; i < meta.size(); ++i) {
        const auto& [key, literal] = meta[i];
        bool last = i + 1 == meta.size();
        if (literal.empty()) {
            out += "    _ck_scalar " + lang + " string \"$_ck_" + key + "\"\n";
            append_lit(entry_prefix("meta", key), entry_suffix(last));
        } else {
            out += "    _ck_buf+=" + q(entry_prefix("meta", key)) + literal + q(entry_suffix(last)) + "\n";
        }
    }
    close();
    out += "}\n";
    return out;
}

std::string wrapper_locate_self(const ComponentConfig& cfg) {
    std::string out;
    out += "_ck_self=${BASH_SOURCE[0]}\n";
    out += "_ck_self=$(readlink -f -- \"$_ck_self\" 2>/dev/null || printf '%s' \"$_ck_self\")\n";
    out += "_ck_resources_dir=$(cd -P -- \"$(dirname -- \"$_ck_self\")\" && pwd -P)\n";
    out += "_ck_executable=$_ck_resources_dir/" + q(cfg.name) + "\n";
    return out;
}

}  // namespace compkit::detail
