#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stn/signal.hpp"

namespace stn {

enum class WindowType { Hann, Rectangular };

/// Analysis/synthesis geometry. The same window is used on both sides
/// (weighted overlap-add), so validity means the squared window overlap-adds
/// to a constant at the chosen hop.
struct StftConfig {
    std::size_t window_length = 2048;
    std::size_t hop = 512;
    WindowType window = WindowType::Hann;

    /// Hann window of the given length with a quarter-window hop.
    static StftConfig hann(std::size_t window_length)
    {
        return {window_length, window_length / 4, WindowType::Hann};
    }

    std::size_t bins() const noexcept { return window_length / 2 + 1; }

    void validate() const;
};

/// Periodic window of length n.
std::vector<double> make_window(WindowType type, std::size_t n);

/// max/min - 1 of the squared-window overlap-add sum over one hop period.
double cola_ripple(std::span<const double> window, std::size_t hop);

/// Frames are centered on multiples of hop, starting at sample 0 and ending
/// on the first center at or beyond the last sample: ceil(length / hop) + 1.
std::size_t stft_frame_count(std::size_t length, std::size_t hop);

struct Spectrogram {
    ComplexMatrix values;  // frames x bins
    StftConfig config;
    double sample_rate = 44100.0;
    std::size_t original_length = 0;

    std::size_t frames() const noexcept { return values.rows(); }
    std::size_t bins() const noexcept { return values.cols(); }
};

Spectrogram stft(std::span<const double> x, const StftConfig& config, double sample_rate);

/// Mono signals only.
Spectrogram stft(const Signal& signal, const StftConfig& config);

/// Inverse with squared-window normalization; returns exactly original_length samples.
std::vector<double> istft(const Spectrogram& spec);

RealMatrix magnitude(const Spectrogram& spec);

}  // namespace stn
