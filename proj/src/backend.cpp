#include "setpat/backend.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace setpat {

std::optional<std::string> BackendConfig::path_from_env() {
    const char* v = std::getenv("SETPAT_SMT");
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

namespace {

bool is_executable(const std::string& path) {
    struct stat st {};
    return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
}

std::optional<std::string> resolve_executable(const std::string& name) {
    if (name.empty()) {
        return std::nullopt;
    }
    if (name.find('/') != std::string::npos) {
        return is_executable(name) ? std::optional<std::string>(name) : std::nullopt;
    }
    const char* path_env = std::getenv("PATH");
    std::stringstream dirs(path_env ? path_env : "/usr/local/bin:/usr/bin:/bin");
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
        std::string candidate = (dir.empty() ? "." : dir) + "/" + name;
        if (is_executable(candidate)) {
            return candidate;
        }
    }
    return std::nullopt;
}

/// Temporary script file removed on scope exit.
class TempScript {
  public:
    explicit TempScript(const std::string& text) {
        const char* dir = std::getenv("TMPDIR");
        path_ = std::string(dir && *dir ? dir : "/tmp") + "/setpat-XXXXXX.smt2";
        int fd = ::mkstemps(path_.data(), 5);
        if (fd < 0) {
            path_.clear();
            return;
        }
        std::size_t written = 0;
        while (written < text.size()) {
            ssize_t n = ::write(fd, text.data() + written, text.size() - written);
            if (n <= 0) {
                break;
            }
            written += static_cast<std::size_t>(n);
        }
        ::close(fd);
        ok_ = written == text.size();
    }
    TempScript(const TempScript&) = delete;
    TempScript& operator=(const TempScript&) = delete;
    ~TempScript() {
        if (!path_.empty()) {
            ::unlink(path_.c_str());
        }
    }

    [[nodiscard]] bool ok() const { return ok_; }
    [[nodiscard]] const std::string& path() const { return path_; }

  private:
    std::string path_;
    bool ok_ = false;
};

// Replies to set-option and friends are skipped.
std::string first_token(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    while (in >> tok && (tok == "unsupported" || tok == "success")) {
    }
    return tok;
}

std::string first_line(const std::string& text) {
    auto end = text.find('\n');
    return text.substr(0, end);
}

}  // namespace

Verdict run_backend_text(const std::string& smtlib, const BackendConfig& cfg) {
    auto exe = resolve_executable(cfg.path);
    if (!exe) {
        return Verdict::unknown(UnknownReason::BackendError,
                                "backend executable '" + cfg.path + "' not found or not executable");
    }
    TempScript file(smtlib);
    if (!file.ok()) {
        return Verdict::unknown(UnknownReason::BackendError, "cannot write temporary script file");
    }

    std::array<int, 2> out_pipe{};
    std::array<int, 2> err_pipe{};
    if (::pipe(out_pipe.data()) != 0 || ::pipe(err_pipe.data()) != 0) {
        return Verdict::unknown(UnknownReason::BackendError, std::string("pipe: ") + std::strerror(errno));
    }

    std::vector<std::string> argv_store;
    argv_store.push_back(*exe);
    argv_store.insert(argv_store.end(), cfg.args.begin(), cfg.args.end());
    argv_store.push_back(file.path());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    argv.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) {
        return Verdict::unknown(UnknownReason::BackendError, std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(err_pipe[1], STDERR_FILENO);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        ::close(err_pipe[0]);
        ::close(err_pipe[1]);
        int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0) {
            ::dup2(devnull, STDIN_FILENO);
        }
        ::execv(argv[0], argv.data());
        ::_exit(127);
    }
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);

    std::string out_text;
    std::string err_text;
    const auto deadline = std::chrono::steady_clock::now() + cfg.timeout;
    bool timed_out = false;
    std::array<pollfd, 2> fds{pollfd{out_pipe[0], POLLIN, 0}, pollfd{err_pipe[0], POLLIN, 0}};
    int open_fds = 2;
    std::array<char, 4096> buf{};
    while (open_fds > 0) {
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            timed_out = true;
            break;
        }
        int rc = ::poll(fds.data(), fds.size(), static_cast<int>(remaining.count()));
        if (rc < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        if (rc == 0) {
            timed_out = true;
            break;
        }
        for (std::size_t i = 0; i < fds.size(); ++i) {
            if (fds[i].fd < 0 || (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) {
                continue;
            }
            ssize_t n = ::read(fds[i].fd, buf.data(), buf.size());
            if (n > 0) {
                (i == 0 ? out_text : err_text).append(buf.data(), static_cast<std::size_t>(n));
            } else {
                ::close(fds[i].fd);
                fds[i].fd = -1;
                --open_fds;
            }
        }
    }
    if (timed_out) {
        ::kill(-pid, SIGKILL);
        ::kill(pid, SIGKILL);
    }
    for (auto& f : fds) {
        if (f.fd >= 0) {
            ::close(f.fd);
        }
    }
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (timed_out) {
        return Verdict::unknown(UnknownReason::Timeout,
                                "no answer within " + std::to_string(cfg.timeout.count()) + " ms");
    }

    const std::string tok = first_token(out_text);
    // A definite first answer is kept even when a later command (such as
    // get-model) made the solver exit nonzero.
    if (tok == "sat") {
        return Verdict::sat(out_text);
    }
    if (tok == "unsat") {
        return Verdict::unsat();
    }
    if (WIFSIGNALED(status)) {
        return Verdict::unknown(UnknownReason::BackendError,
                                "backend killed by signal " + std::to_string(WTERMSIG(status)));
    }
    if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
        std::string why = first_line(!err_text.empty() ? err_text : out_text);
        return Verdict::unknown(UnknownReason::BackendError,
                                "backend exited with status " + std::to_string(WEXITSTATUS(status)) +
                                    (why.empty() ? "" : ": " + why));
    }
    if (tok == "unknown") {
        return Verdict::unknown(UnknownReason::SolverUnknown, "solver answered unknown");
    }
    return Verdict::unknown(UnknownReason::BackendError,
                            "unexpected backend output: '" + first_line(out_text) + "'");
}

Verdict run_backend(const smt::SmtScript& script, const BackendConfig& cfg) {
    smt::SmtScript copy = script;
    copy.get_model = cfg.get_model;
    return run_backend_text(smt::to_smtlib(copy), cfg);
}

}  // namespace setpat
