#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace codeeff {

// One execution of a program on one input, in the shim's report format.
struct ShimReport {
    std::string status = "ok";  // ok | timeout | runtime_error | oom
    double wall_ms = 0;
    double cpu_ms = 0;
    std::int64_t max_rss_kb = 0;
    std::string stdout_text;
    // Set instead of stdout_text when the output was too large to ship.
    std::optional<std::string> stdout_digest;  // "sha256:<hex>"
    std::optional<std::int64_t> stdout_bytes;
    std::string stderr_tail;
};

// Parses one report line. Throws InfraError on malformed input.
ShimReport parse_shim_report(std::string_view line);
nlohmann::json to_json(const ShimReport& report);

// "sha256:<hex>" of the bytes.
std::string sha256_digest(std::string_view bytes);

// Launches subject programs. Implementations must be safe to call from
// several threads at once.
class Executor {
public:
    virtual ~Executor() = default;

    // Runs `program` with stdin from `input` and `workdir` as the working
    // directory. Throws InfraError when the backend itself fails.
    virtual ShimReport execute(const std::filesystem::path& program, const std::filesystem::path& input,
                               std::int64_t time_limit_ms, std::int64_t memory_limit_kb,
                               const std::filesystem::path& workdir) const = 0;

    // Whether the source compiles. The default uses the built-in parser.
    virtual bool compiles(std::string_view source, std::string* diagnostic = nullptr) const;
};

// Runs programs directly under the interpreter with an address-space cap,
// a process group and a hard kill at the time limit.
class DirectExecutor : public Executor {
public:
    explicit DirectExecutor(std::string interpreter = "python3");

    ShimReport execute(const std::filesystem::path& program, const std::filesystem::path& input,
                       std::int64_t time_limit_ms, std::int64_t memory_limit_kb,
                       const std::filesystem::path& workdir) const override;

    // Asks the interpreter to compile the source without running it.
    bool compiles(std::string_view source, std::string* diagnostic = nullptr) const override;

private:
    std::string interpreter_;
};

// Delegates each run to an external shim:
//   <command...> <program> <input-file> <time_ms> <mem_kb>
// which must print exactly one JSON report line.
class ShimExecutor : public Executor {
public:
    explicit ShimExecutor(std::vector<std::string> command);

    ShimReport execute(const std::filesystem::path& program, const std::filesystem::path& input,
                       std::int64_t time_limit_ms, std::int64_t memory_limit_kb,
                       const std::filesystem::path& workdir) const override;

private:
    std::vector<std::string> command_;
};

// Fresh directory under the system temp dir; removed by the destructor.
class ScratchDir {
public:
    explicit ScratchDir(std::string_view prefix = "codeeff");
    ~ScratchDir();
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace codeeff
