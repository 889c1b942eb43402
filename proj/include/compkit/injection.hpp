#pragma once

#include "compkit/argument_spec.hpp"
#include "compkit/config.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace compkit {

/// Ordered string-valued metadata exposed to scripts as `meta`.
using MetaMap = std::vector<std::pair<std::string, std::string>>;

/// Line-comment token: `#` for bash/python/r, `//` for javascript.
std::string_view comment_token(Language language);
std::string start_marker(Language language);
std::string end_marker(Language language);

/// Language literal for a string (also used for keys).
std::string quote_string(Language language, std::string_view text);
std::string scalar_literal(Language language, const Scalar& value);

/// Assignment code binding `par` and `meta`. Bash gets one variable per key
/// (`par_<id>`, `meta_<key>`); the other languages get a single mapping each.
std::string serialize_params(Language language, const ParamMap& params, const MetaMap& meta);

/// The script cut at the injection point: output is `head + block + tail`.
struct ScriptSplit {
    std::string head;
    std::string tail;
};

/// Throws InjectError on a misplaced, unmatched, or repeated marker.
ScriptSplit split_for_injection(std::string_view script, Language language);

std::string inject(std::string_view script, Language language, std::string_view block);

}  // namespace compkit
