#pragma once

// Building blocks shared by the native and container wrappers. Every piece
// reproduces the in-process semantics of parse_args/check_files and
// serialize_params in bash.

#include "compkit/config.hpp"

#include <string>

namespace compkit::detail {

/// Shebang, header comment, and the helper functions (die/warn/help/coerce).
std::string wrapper_prelude(const ComponentConfig& cfg);

/// `_ck_parse "$@"` and `_ck_finish` (defaults, required and file checks).
/// Parsed values live in `_ck_seen_<i>` / `_ck_val_<i>` arrays, one per argument.
std::string wrapper_parser(const ComponentConfig& cfg);

/// `_ck_render_block`: fills `_ck_buf` with serialize_params output for
/// `language`, reading meta paths from `_ck_resources_dir` and `_ck_executable`.
std::string wrapper_serializer(const ComponentConfig& cfg, Language language);

/// Sets `_ck_resources_dir` and `_ck_executable` from the wrapper's own location.
std::string wrapper_locate_self(const ComponentConfig& cfg);

}  // namespace compkit::detail
