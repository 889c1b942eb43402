#include "compkit/util.hpp"

#include "compkit/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <unistd.h>

namespace compkit {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::string_view content, bool executable) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::error_code ec;
    bool same = false;
    if (fs::is_regular_file(path, ec)) {
        std::ifstream in(path, std::ios::binary);
        std::string existing{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        same = existing == content;
    }
    if (!same) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + path.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error("failed writing " + path.string());
        }
    }
    auto perms = fs::perms::owner_read | fs::perms::owner_write | fs::perms::group_read |
                 fs::perms::others_read;
    if (executable) {
        perms |= fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec;
    }
    fs::permissions(path, perms, fs::perm_options::replace);
}

std::string shell_quote(std::string_view text) {
    std::string out = "'";
    for (char c : text) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += '\'';
    return out;
}

std::vector<std::string> split(std::string_view text, std::string_view sep) {
    std::vector<std::string> parts;
    if (sep.empty()) {
        parts.emplace_back(text);
        return parts;
    }
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(text.substr(start));
            return parts;
        }
        parts.emplace_back(text.substr(start, pos - start));
        start = pos + sep.size();
    }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

std::string ascii_lower(std::string_view text) {
    std::string out(text);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

std::string absolute_lexical(std::string_view path, std::string_view cwd) {
    std::string full;
    if (!path.empty() && path.front() == '/') {
        full = path;
    } else {
        full = std::string(cwd) + "/" + std::string(path);
    }
    std::vector<std::string> kept;
    for (auto& seg : split(full, "/")) {
        if (seg.empty() || seg == ".") {
            continue;
        }
        if (seg == "..") {
            if (!kept.empty()) {
                kept.pop_back();
            }
            continue;
        }
        kept.push_back(seg);
    }
    return "/" + join(kept, "/");
}

fs::path find_executable(std::string_view program) {
    if (program.find('/') != std::string_view::npos) {
        return fs::path(program);
    }
    const char* env = std::getenv("PATH");
    if (env == nullptr) {
        return {};
    }
    for (const auto& dir : split(env, ":")) {
        fs::path candidate = fs::path(dir.empty() ? "." : dir) / program;
        if (::access(candidate.c_str(), X_OK) == 0 && !fs::is_directory(candidate)) {
            return candidate;
        }
    }
    return {};
}

std::string directory_digest(const fs::path& root) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            files.push_back(fs::relative(entry.path(), root));
        }
    }
    std::sort(files.begin(), files.end());
    // FNV-1a over a length-prefixed stream; collisions would need adversarial input.
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&hash](std::string_view bytes) {
        for (unsigned char c : bytes) {
            hash ^= c;
            hash *= 0x100000001b3ULL;
        }
    };
    for (const auto& rel : files) {
        auto full = root / rel;
        auto content = read_file(full);
        bool exec = (fs::status(full).permissions() & fs::perms::owner_exec) != fs::perms::none;
        std::string header = rel.generic_string() + '\0' + (exec ? "x" : "-") + '\0' +
                             std::to_string(content.size()) + '\0';
        mix(header);
        mix(content);
    }
    std::ostringstream out;
    out << std::hex << hash << '-' << files.size();
    return out.str();
}

fs::path make_temp_dir(std::string_view prefix) {
    std::string templ = (fs::temp_directory_path() / (std::string(prefix) + "-XXXXXX")).string();
    if (::mkdtemp(templ.data()) == nullptr) {
        throw Error("cannot create temporary directory under " + fs::temp_directory_path().string());
    }
    return fs::path(templ);
}

bool debug_enabled() {
    const char* value = std::getenv("COMPKIT_DEBUG");
    return value != nullptr && *value != '\0' && std::string_view(value) != "0";
}

}  // namespace compkit
