#include "forge/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>

namespace forge {

namespace {

bool is_executable_file(const std::string& path) {
    struct stat st {};
    return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
           ::access(path.c_str(), X_OK) == 0;
}

}  // namespace

std::string find_executable(const std::string& name) {
    if (name.find('/') != std::string::npos) {
        return is_executable_file(name) ? name : "";
    }
    const char* path_env = std::getenv("PATH");
    if (!path_env) return "";
    std::istringstream in(path_env);
    std::string dir;
    while (std::getline(in, dir, ':')) {
        if (dir.empty()) continue;
        std::string candidate = dir + "/" + name;
        if (is_executable_file(candidate)) return candidate;
    }
    return "";
}

ProcessResult run_process(const std::vector<std::string>& argv,
                          std::chrono::milliseconds timeout,
                          const std::string& working_dir) {
    if (argv.empty()) throw std::invalid_argument("empty argv");
    std::string exe = find_executable(argv[0]);
    if (exe.empty()) throw ToolMissing("executable not found: " + argv[0]);

    int out_pipe[2];
    int err_pipe[2];
    if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0)
        throw std::runtime_error("pipe() failed");

    pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error("fork() failed");

    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(err_pipe[1], STDERR_FILENO);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        ::close(err_pipe[0]);
        ::close(err_pipe[1]);
        if (!working_dir.empty() && ::chdir(working_dir.c_str()) != 0) ::_exit(127);
        std::vector<char*> args;
        args.push_back(const_cast<char*>(exe.c_str()));
        for (std::size_t i = 1; i < argv.size(); ++i)
            args.push_back(const_cast<char*>(argv[i].c_str()));
        args.push_back(nullptr);
        ::execv(exe.c_str(), args.data());
        ::_exit(127);
    }

    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    ::fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    ::fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    ProcessResult result;
    auto deadline = std::chrono::steady_clock::now() + timeout;
    bool open_out = true;
    bool open_err = true;
    char buf[4096];

    while (open_out || open_err) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            result.timed_out = true;
            ::kill(-pid, SIGKILL);
            break;
        }
        struct pollfd fds[2];
        nfds_t nfds = 0;
        if (open_out) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (open_err) fds[nfds++] = {err_pipe[0], POLLIN, 0};
        int rc = ::poll(fds, nfds, static_cast<int>(std::min<long long>(remaining.count(), 200)));
        if (rc < 0 && errno != EINTR) break;

        auto drain = [&](int fd, bool& open_flag, std::string& sink) {
            while (true) {
                ssize_t n = ::read(fd, buf, sizeof(buf));
                if (n > 0) {
                    sink.append(buf, static_cast<std::size_t>(n));
                } else if (n == 0) {
                    open_flag = false;
                    break;
                } else {
                    break;  // EAGAIN or error
                }
            }
        };
        for (nfds_t i = 0; i < nfds; ++i) {
            if (fds[i].revents & (POLLIN | POLLHUP)) {
                if (fds[i].fd == out_pipe[0])
                    drain(out_pipe[0], open_out, result.stdout_text);
                else
                    drain(err_pipe[0], open_err, result.stderr_text);
            }
        }
    }

    ::close(out_pipe[0]);
    ::close(err_pipe[0]);

    int status = 0;
    ::waitpid(pid, &status, 0);
    if (result.timed_out) {
        result.exit_code = -1;
    } else if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else {
        result.exit_code = -1;
    }
    return result;
}

}  // namespace forge
