#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stn/cqt.hpp"

namespace stn {

enum class NoiseBackend { Spectral, Neural };

inline constexpr std::size_t kConditioningHop = 256;
inline constexpr double kMinNoiseAlpha = 1.0;
inline constexpr double kMaxNoiseAlpha = 16.0;

struct NoiseStretchRequest {
    std::vector<double> noise;
    double sample_rate = 44100.0;
    double alpha = 1.0;
    NoiseBackend backend = NoiseBackend::Spectral;
    CqtFeatures cqt;  // raw magnitudes of `noise`, hop 256
    std::uint64_t seed = 0x5eed;

    void validate() const;
};

/// Audio samples generated per conditioning frame: round(alpha * hop).
std::size_t samples_per_frame(double alpha, std::size_t hop);

/// frames * samples_per_frame(alpha, hop)
std::size_t noise_output_length(std::size_t frames, double alpha, std::size_t hop);

struct SpectralSynthConfig {
    std::size_t window_length = 1024;
    std::size_t hop = 256;
};

/// Filtered white noise whose short-time power spectrum follows the
/// time-dilated CQT power estimate. Each synthesis frame draws independent
/// uniform phases from a generator seeded by (seed, frame index), so output is
/// bit-reproducible for a given seed.
std::vector<double> stretch_noise_spectral(const NoiseStretchRequest& request, const SpectralSynthConfig& config = {});

struct NeuralBackendConfig {
    /// Executable invoked as `command <request_dir>`; empty means no neural backend.
    std::string command;
    /// Parent of the request directories; empty selects the system temp directory.
    std::filesystem::path work_dir;
    std::chrono::milliseconds timeout{std::chrono::minutes(30)};
    bool keep_request_dir = false;
};

/// Writes a request directory (noise.wav, cond.bin, req.json), runs the
/// external synthesizer on it and reads back out.wav + status.json. Throws
/// BackendError when the synthesizer is missing, fails, times out, or returns
/// audio violating the samples-per-frame length law (tolerance: one frame).
std::vector<double> stretch_noise_neural(const NoiseStretchRequest& request, const NeuralBackendConfig& config);

std::vector<double> stretch_noise(const NoiseStretchRequest& request, const SpectralSynthConfig& spectral = {},
                                  const NeuralBackendConfig& neural = {});

}  // namespace stn
