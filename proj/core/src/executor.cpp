#include "codeeff/executor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/syscall.h>
#include <sys/time.h>
#include <sys/wait.h>
#include <unistd.h>

#include <openssl/evp.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "codeeff/error.hpp"
#include "codeeff/pynorm/parser.hpp"

namespace codeeff {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::size_t k_stderr_tail = 2048;

// ---------------------------------------------------------------------------
// reports

ShimReport parse_shim_report(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw InfraError(std::string("shim report is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InfraError("shim report is not a JSON object");
    ShimReport r;
    try {
        r.status = j.at("status").get<std::string>();
        if (r.status != "ok" && r.status != "timeout" && r.status != "runtime_error" && r.status != "oom")
            throw InfraError("shim report has unknown status '" + r.status + "'");
        r.wall_ms = j.at("wall_ms").get<double>();
        r.cpu_ms = j.value("cpu_ms", 0.0);
        r.max_rss_kb = j.value("max_rss_kb", std::int64_t{0});
        if (auto it = j.find("stdout"); it != j.end() && it->is_string()) r.stdout_text = it->get<std::string>();
        if (auto it = j.find("stdout_digest"); it != j.end() && it->is_string())
            r.stdout_digest = it->get<std::string>();
        if (auto it = j.find("stdout_bytes"); it != j.end() && it->is_number_integer())
            r.stdout_bytes = it->get<std::int64_t>();
        r.stderr_tail = j.value("stderr_tail", std::string());
    } catch (const json::exception& e) {
        throw InfraError(std::string("shim report is missing fields: ") + e.what());
    }
    if (r.wall_ms < 0) throw InfraError("shim report has negative wall_ms");
    return r;
}

json to_json(const ShimReport& r) {
    json j = {{"status", r.status},         {"wall_ms", r.wall_ms},     {"cpu_ms", r.cpu_ms},
              {"max_rss_kb", r.max_rss_kb}, {"stdout", r.stdout_text}, {"stderr_tail", r.stderr_tail}};
    if (r.stdout_digest) j["stdout_digest"] = *r.stdout_digest;
    if (r.stdout_bytes) j["stdout_bytes"] = *r.stdout_bytes;
    return j;
}

std::string sha256_digest(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out = "sha256:";
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

bool Executor::compiles(std::string_view source, std::string* diagnostic) const {
    try {
        pynorm::parse_module(source);
        return true;
    } catch (const Error& e) {
        if (diagnostic) *diagnostic = e.what();
        return false;
    }
}

// ---------------------------------------------------------------------------
// process spawning

namespace {

struct SpawnSpec {
    std::vector<std::string> argv;
    fs::path cwd;
    fs::path stdin_path;
    fs::path stdout_path;
    fs::path stderr_path;
    std::int64_t memory_limit_kb = 0;  // 0: no cap
    std::int64_t timeout_ms = 0;
};

struct SpawnResult {
    bool timed_out = false;
    int exit_code = -1;
    int term_signal = 0;
    double wall_ms = 0;
    double cpu_ms = 0;
    std::int64_t max_rss_kb = 0;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int open_pidfd(pid_t pid) {
#ifdef SYS_pidfd_open
    return static_cast<int>(syscall(SYS_pidfd_open, pid, 0));
#else
    (void)pid;
    return -1;
#endif
}

// Blocks until the child exits or the deadline passes. Returns false on
// timeout.
bool wait_until(pid_t pid, std::chrono::steady_clock::time_point deadline) {
    int fd = open_pidfd(pid);
    if (fd >= 0) {
        bool exited = false;
        while (true) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
            if (left.count() <= 0) break;
            pollfd p{fd, POLLIN, 0};
            int rc = poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
            if (rc > 0) {
                exited = true;
                break;
            }
            if (rc < 0 && errno != EINTR) break;
        }
        close(fd);
        if (exited) return true;
        // Re-check in case the exit raced the deadline.
        siginfo_t info{};
        return waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOHANG | WNOWAIT) == 0 && info.si_pid == pid;
    }
    while (std::chrono::steady_clock::now() < deadline) {
        siginfo_t info{};
        if (waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOHANG | WNOWAIT) == 0 && info.si_pid == pid)
            return true;
        std::this_thread::sleep_for(std::chrono::microseconds(200));
    }
    return false;
}

SpawnResult spawn(const SpawnSpec& spec) {
    // Everything the child touches is prepared before fork.
    std::vector<char*> argv;
    for (const std::string& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    std::string cwd = spec.cwd.string(), in = spec.stdin_path.string(), out = spec.stdout_path.string(),
                err = spec.stderr_path.string();

    int status_pipe[2];
    if (pipe2(status_pipe, O_CLOEXEC) != 0) throw InfraError("pipe failed: " + std::string(std::strerror(errno)));

    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        close(status_pipe[0]);
        close(status_pipe[1]);
        throw InfraError("fork failed: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        setpgid(0, 0);
        int fail = 0;
        auto redirect = [&](const std::string& path, int flags, int target) {
            int fd = open(path.c_str(), flags, 0644);
            if (fd < 0 || dup2(fd, target) < 0) return false;
            close(fd);
            return true;
        };
        if (!spec.cwd.empty() && chdir(cwd.c_str()) != 0) fail = errno;
        if (!fail && !redirect(in, O_RDONLY, 0)) fail = errno;
        if (!fail && !redirect(out, O_WRONLY | O_CREAT | O_TRUNC, 1)) fail = errno;
        if (!fail && !redirect(err, O_WRONLY | O_CREAT | O_TRUNC, 2)) fail = errno;
        if (!fail && spec.memory_limit_kb > 0) {
            rlimit lim{};
            lim.rlim_cur = lim.rlim_max = static_cast<rlim_t>(spec.memory_limit_kb) * 1024;
            if (setrlimit(RLIMIT_AS, &lim) != 0) fail = errno;
        }
        if (!fail) {
            execvp(argv[0], argv.data());
            fail = errno;
        }
        ssize_t ignored = write(status_pipe[1], &fail, sizeof fail);
        (void)ignored;
        _exit(127);
    }
    setpgid(pid, pid);
    close(status_pipe[1]);

    auto deadline = start + std::chrono::milliseconds(spec.timeout_ms);
    SpawnResult result;
    if (!wait_until(pid, deadline)) {
        result.timed_out = true;
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
    }
    int status = 0;
    rusage usage{};
    while (wait4(pid, &status, 0, &usage) < 0 && errno == EINTR) {
    }
    auto end = std::chrono::steady_clock::now();
    // Stray grandchildren die with the group.
    kill(-pid, SIGKILL);

    int exec_errno = 0;
    ssize_t got = read(status_pipe[0], &exec_errno, sizeof exec_errno);
    close(status_pipe[0]);
    if (got == static_cast<ssize_t>(sizeof exec_errno) && exec_errno != 0)
        throw InfraError("cannot launch '" + spec.argv.front() + "': " + std::strerror(exec_errno));

    result.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
    result.cpu_ms = (static_cast<double>(usage.ru_utime.tv_sec + usage.ru_stime.tv_sec) * 1000.0) +
                    static_cast<double>(usage.ru_utime.tv_usec + usage.ru_stime.tv_usec) / 1000.0;
    result.max_rss_kb = usage.ru_maxrss;
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    if (WIFSIGNALED(status)) result.term_signal = WTERMSIG(status);
    return result;
}

std::string tail(const std::string& s, std::size_t n) { return s.size() <= n ? s : s.substr(s.size() - n); }

}  // namespace

// ---------------------------------------------------------------------------
// DirectExecutor

DirectExecutor::DirectExecutor(std::string interpreter) : interpreter_(std::move(interpreter)) {}

ShimReport DirectExecutor::execute(const fs::path& program, const fs::path& input, std::int64_t time_limit_ms,
                                   std::int64_t memory_limit_kb, const fs::path& workdir) const {
    SpawnSpec spec;
    spec.argv = {interpreter_, fs::absolute(program).string()};
    spec.cwd = workdir;
    spec.stdin_path = fs::absolute(input);
    spec.stdout_path = workdir / ".stdout";
    spec.stderr_path = workdir / ".stderr";
    spec.memory_limit_kb = memory_limit_kb;
    spec.timeout_ms = time_limit_ms;
    SpawnResult run = spawn(spec);

    ShimReport r;
    r.wall_ms = run.wall_ms;
    r.cpu_ms = run.cpu_ms;
    r.max_rss_kb = run.max_rss_kb;
    r.stdout_text = read_file(spec.stdout_path);
    r.stderr_tail = tail(read_file(spec.stderr_path), k_stderr_tail);
    if (run.timed_out) {
        r.status = "timeout";
        r.wall_ms = std::max(r.wall_ms, static_cast<double>(time_limit_ms));
    } else if (run.exit_code == 0) {
        r.status = "ok";
    } else if (r.stderr_tail.find("MemoryError") != std::string::npos) {
        r.status = "oom";
    } else {
        r.status = "runtime_error";
    }
    return r;
}

bool DirectExecutor::compiles(std::string_view source, std::string* diagnostic) const {
    ScratchDir dir("codeeff-compile");
    fs::path file = dir.path() / "program.py";
    {
        std::ofstream out(file, std::ios::binary);
        out << source;
    }
    std::ofstream(dir.path() / "empty");
    SpawnSpec spec;
    spec.argv = {interpreter_, "-c",
                 "import sys\nsrc = open(sys.argv[1], 'rb').read()\ncompile(src, 'program.py', 'exec')\n",
                 file.string()};
    spec.cwd = dir.path();
    spec.stdin_path = dir.path() / "empty";
    spec.stdout_path = dir.path() / "out";
    spec.stderr_path = dir.path() / "err";
    spec.timeout_ms = 30000;
    SpawnResult run = spawn(spec);
    if (run.timed_out) throw InfraError("interpreter did not finish compiling within 30 s");
    if (run.exit_code == 0) return true;
    if (diagnostic) *diagnostic = tail(read_file(spec.stderr_path), k_stderr_tail);
    return false;
}

// ---------------------------------------------------------------------------
// ShimExecutor

ShimExecutor::ShimExecutor(std::vector<std::string> command) : command_(std::move(command)) {
    if (command_.empty()) throw InfraError("shim command is empty");
}

ShimReport ShimExecutor::execute(const fs::path& program, const fs::path& input, std::int64_t time_limit_ms,
                                 std::int64_t memory_limit_kb, const fs::path& workdir) const {
    const std::string& exe = command_.front();
    if (exe.find('/') != std::string::npos && !fs::exists(exe)) throw InfraError("shim not found: " + exe);

    // The shim's own files live beside the run directory so the subject
    // never sees them.
    ScratchDir io("codeeff-shim");
    std::ofstream(io.path() / "empty");
    SpawnSpec spec;
    spec.argv = command_;
    spec.argv.push_back(fs::absolute(program).string());
    spec.argv.push_back(fs::absolute(input).string());
    spec.argv.push_back(std::to_string(time_limit_ms));
    spec.argv.push_back(std::to_string(memory_limit_kb));
    spec.cwd = workdir;
    spec.stdin_path = io.path() / "empty";
    spec.stdout_path = io.path() / "report";
    spec.stderr_path = io.path() / "stderr";
    // The shim enforces the subject's limit; this only catches a hung shim.
    spec.timeout_ms = time_limit_ms + 10000;
    SpawnResult run = spawn(spec);
    if (run.timed_out) throw InfraError("shim did not report within " + std::to_string(spec.timeout_ms) + " ms");

    std::string out = read_file(spec.stdout_path);
    std::string last;
    std::istringstream lines(out);
    for (std::string line; std::getline(lines, line);)
        if (line.find_first_not_of(" \t\r") != std::string::npos) last = line;
    if (last.empty()) {
        throw InfraError("shim produced no report (exit code " + std::to_string(run.exit_code) +
                         "): " + tail(read_file(spec.stderr_path), 512));
    }
    return parse_shim_report(last);
}

// ---------------------------------------------------------------------------
// ScratchDir

ScratchDir::ScratchDir(std::string_view prefix) {
    std::string templ = (fs::temp_directory_path() / (std::string(prefix) + "-XXXXXX")).string();
    std::vector<char> buf(templ.begin(), templ.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw InfraError("cannot create scratch directory: " + std::string(std::strerror(errno)));
    path_ = buf.data();
}

ScratchDir::~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

}  // namespace codeeff
