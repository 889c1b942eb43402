#include "compkit/process.hpp"

#include "compkit/errors.hpp"
#include "compkit/util.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace compkit {

namespace fs = std::filesystem;

namespace {

struct Pipe {
    int fd[2] = {-1, -1};

    Pipe() {
        if (::pipe2(fd, O_CLOEXEC) != 0) {
            throw Error(std::string("pipe: ") + std::strerror(errno));
        }
    }
    ~Pipe() {
        close_end(0);
        close_end(1);
    }
    void close_end(int i) {
        if (fd[i] >= 0) {
            ::close(fd[i]);
            fd[i] = -1;
        }
    }
};

std::vector<std::string> merged_environment(const std::map<std::string, std::string>& overrides) {
    std::vector<std::string> out;
    for (char** e = environ; *e != nullptr; ++e) {
        std::string_view entry(*e);
        auto key = entry.substr(0, entry.find('='));
        if (!overrides.contains(std::string(key))) {
            out.emplace_back(entry);
        }
    }
    for (const auto& [key, value] : overrides) {
        out.push_back(key + "=" + value);
    }
    return out;
}

std::string resolve_program(const std::string& program, const std::vector<std::string>& env) {
    if (program.find('/') != std::string::npos) {
        return program;
    }
    std::string path_var = "/usr/bin:/bin";
    for (const auto& entry : env) {
        if (entry.starts_with("PATH=")) {
            path_var = entry.substr(5);
        }
    }
    for (const auto& dir : split(path_var, ":")) {
        auto candidate = fs::path(dir.empty() ? "." : dir) / program;
        if (::access(candidate.c_str(), X_OK) == 0 && !fs::is_directory(candidate)) {
            return candidate.string();
        }
    }
    return {};
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options) {
    if (argv.empty()) {
        throw Error("run_process: empty argv");
    }
    // A child that exits before reading its stdin must not kill us.
    static const bool ignore_sigpipe = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)ignore_sigpipe;
    auto env = merged_environment(options.env);
    auto program = resolve_program(argv[0], env);
    if (program.empty()) {
        return {127, {}, argv[0] + ": command not found\n"};
    }

    Pipe in;
    Pipe out;
    Pipe err;
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.fd[0], 0);
    posix_spawn_file_actions_adddup2(&actions, out.fd[1], 1);
    posix_spawn_file_actions_adddup2(&actions, options.merge_stderr ? out.fd[1] : err.fd[1], 2);
    if (options.cwd) {
        posix_spawn_file_actions_addchdir_np(&actions, options.cwd->c_str());
    }

    std::vector<char*> c_argv;
    for (const auto& a : argv) {
        c_argv.push_back(const_cast<char*>(a.c_str()));
    }
    c_argv.push_back(nullptr);
    std::vector<char*> c_env;
    for (const auto& e : env) {
        c_env.push_back(const_cast<char*>(e.c_str()));
    }
    c_env.push_back(nullptr);

    pid_t pid = 0;
    int rc = posix_spawn(&pid, program.c_str(), &actions, nullptr, c_argv.data(), c_env.data());
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) {
        return {127, {}, argv[0] + ": " + std::strerror(rc) + "\n"};
    }
    in.close_end(0);
    out.close_end(1);
    err.close_end(1);
    if (options.merge_stderr) {
        err.close_end(0);
    }

    ProcessResult result;
    std::size_t written = 0;
    if (options.stdin_text.empty()) {
        in.close_end(1);
    } else {
        ::fcntl(in.fd[1], F_SETFL, O_NONBLOCK);
    }
    char buffer[65536];
    for (;;) {
        std::vector<pollfd> fds;
        if (out.fd[0] >= 0) fds.push_back({out.fd[0], POLLIN, 0});
        if (err.fd[0] >= 0) fds.push_back({err.fd[0], POLLIN, 0});
        if (in.fd[1] >= 0) fds.push_back({in.fd[1], POLLOUT, 0});
        if (fds.empty()) {
            break;
        }
        if (::poll(fds.data(), fds.size(), -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (const auto& p : fds) {
            if (p.revents == 0) {
                continue;
            }
            if (p.fd == in.fd[1]) {
                auto n = ::write(p.fd, options.stdin_text.data() + written,
                                 options.stdin_text.size() - written);
                if (n > 0) written += static_cast<std::size_t>(n);
                if (n < 0 && errno != EAGAIN) written = options.stdin_text.size();
                if (written >= options.stdin_text.size()) in.close_end(1);
                continue;
            }
            auto n = ::read(p.fd, buffer, sizeof buffer);
            if (n > 0) {
                (p.fd == out.fd[0] ? result.out : result.err).append(buffer, static_cast<std::size_t>(n));
            } else if (n == 0 || errno != EINTR) {
                (p.fd == out.fd[0] ? out : err).close_end(0);
            }
        }
    }

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

int run_foreground(const std::vector<std::string>& argv) {
    if (argv.empty()) {
        throw Error("run_foreground: empty argv");
    }
    std::vector<char*> c_argv;
    for (const auto& a : argv) {
        c_argv.push_back(const_cast<char*>(a.c_str()));
    }
    c_argv.push_back(nullptr);
    pid_t pid = 0;
    if (int rc = posix_spawnp(&pid, argv[0].c_str(), nullptr, nullptr, c_argv.data(), environ); rc != 0) {
        throw Error("cannot execute " + argv[0] + ": " + std::strerror(rc));
    }
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFSIGNALED(status)) {
        return 128 + WTERMSIG(status);
    }
    return WEXITSTATUS(status);
}

}  // namespace compkit
