#pragma once

#include <filesystem>

#include "stn/signal.hpp"

namespace stn {

struct WavInfo {
    int sample_rate = 0;
    int channels = 0;
    int bits_per_sample = 0;
    bool is_float = false;
};

/// Reads PCM 16/24/32-bit or IEEE float 32-bit RIFF/WAVE (mono or stereo).
/// Integer PCM is scaled by 1 / 2^(bits-1). Throws IoError.
Signal read_wav(const std::filesystem::path& path, WavInfo* info = nullptr);

/// Writes integer PCM with 16 or 24 bits. Samples are rounded and clipped to range.
void write_wav(const std::filesystem::path& path, const Signal& signal, int bits_per_sample = 16);

}  // namespace stn
