#include <spawn.h>
#include <spdlog/spdlog.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "stn/logging.hpp"
#include "stn/matrix_io.hpp"
#include "stn/noise_stretch.hpp"
#include "stn/wav.hpp"

extern char** environ;

namespace stn {

namespace {

namespace fs = std::filesystem;
using Kind = BackendError::Kind;

fs::path make_request_dir(const NeuralBackendConfig& config)
{
    static std::atomic<unsigned> counter{0};
    const fs::path parent = config.work_dir.empty() ? fs::temp_directory_path() : config.work_dir;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const fs::path dir = parent / ("stn-neural-" + std::to_string(::getpid()) + "-" + std::to_string(stamp) + "-" +
                                   std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

/// Runs command with the request dir as its only argument; returns the exit status.
int run_synthesizer(const std::string& command, const fs::path& dir, std::chrono::milliseconds timeout)
{
    std::string arg = dir.string();
    char* argv[] = {const_cast<char*>(command.c_str()), arg.data(), nullptr};
    pid_t pid = 0;
    const int rc = ::posix_spawnp(&pid, command.c_str(), nullptr, nullptr, argv, environ);
    if (rc != 0)
        throw BackendError(Kind::Unavailable, "backend unavailable: cannot start '" + command + "' (" +
                                                  std::strerror(rc) + "); use the spectral backend instead");

    const auto deadline = std::chrono::steady_clock::now() + timeout;
    int status = 0;
    for (;;) {
        const pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0 && errno != EINTR) throw BackendError(Kind::Failed, "waitpid failed for neural synthesizer");
        if (std::chrono::steady_clock::now() > deadline) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            throw BackendError(Kind::Timeout, "neural synthesizer timed out");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

struct DirCleanup {
    fs::path dir;
    bool keep;
    ~DirCleanup()
    {
        std::error_code ec;
        if (!keep) fs::remove_all(dir, ec);
    }
};

}  // namespace

std::vector<double> stretch_noise_neural(const NoiseStretchRequest& request, const NeuralBackendConfig& config)
{
    request.validate();
    if (config.command.empty())
        throw BackendError(Kind::Unavailable,
                           "backend unavailable: no neural synthesizer configured; use the spectral backend instead");

    const fs::path dir = make_request_dir(config);
    DirCleanup cleanup{dir, config.keep_request_dir};

    std::vector<double> clipped(request.noise);
    for (double& v : clipped) v = std::clamp(v, -1.0, 1.0);
    write_wav(dir / "noise.wav", Signal::mono(std::move(clipped), static_cast<int>(request.sample_rate)), 16);
    write_matrix(dir / "cond.bin", compress_conditioning(request.cqt).values);

    const std::size_t spf = samples_per_frame(request.alpha, request.cqt.hop());
    const nlohmann::json req = {
        {"version", 1},
        {"alpha", request.alpha},
        {"hop", request.cqt.hop()},
        {"seed", request.seed},
        {"sample_rate", request.sample_rate},
        {"frames", request.cqt.frames()},
        {"bins", request.cqt.bins()},
        {"samples_per_frame", spf},
    };
    std::ofstream(dir / "req.json") << req.dump(2) << '\n';

    log().info("neural synthesizer: {} {}", config.command, dir.string());
    const int exit_code = run_synthesizer(config.command, dir, config.timeout);

    std::string message;
    bool ok = exit_code == 0;
    if (std::ifstream status_file(dir / "status.json"); status_file) {
        try {
            const auto status = nlohmann::json::parse(status_file);
            ok = ok && status.value("status", std::string{}) == "ok";
            message = status.value("message", std::string{});
        } catch (const nlohmann::json::exception& e) {
            ok = false;
            message = std::string("malformed status.json: ") + e.what();
        }
    } else {
        ok = false;
        message = "no status.json written";
    }
    if (!ok)
        throw BackendError(Kind::Failed, "neural synthesizer failed (exit " + std::to_string(exit_code) + "): " + message);

    Signal out;
    try {
        out = read_wav(dir / "out.wav");
    } catch (const IoError& e) {
        throw BackendError(Kind::Failed, std::string("neural synthesizer output unreadable: ") + e.what());
    }
    if (out.num_channels() != 1 || out.sample_rate != static_cast<int>(request.sample_rate))
        throw BackendError(Kind::ContractViolation, "neural synthesizer returned audio in the wrong format");

    const std::size_t expected = request.cqt.frames() * spf;
    const std::size_t got = out.length();
    const std::size_t diff = got > expected ? got - expected : expected - got;
    if (diff > spf)
        throw BackendError(Kind::ContractViolation, "neural synthesizer returned " + std::to_string(got) +
                                                        " samples, expected " + std::to_string(expected) + " +/- " +
                                                        std::to_string(spf));
    return std::move(out.channels.front());
}

}  // namespace stn
