#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stn/signal.hpp"

namespace stn {

struct CqtConfig {
    std::size_t hop = 256;
    double f_min = 32.7;
    double f_max = 0.0;  // 0 selects the Nyquist frequency
    int bins_per_octave = 48;
    double kernel_threshold = 1e-4;  // spectral kernel entries below this fraction of the peak are dropped

    double resolved_f_max(double sample_rate) const { return f_max > 0.0 ? f_max : sample_rate / 2.0; }

    /// floor(bins_per_octave * log2(f_max / f_min)): every bin center lies
    /// below f_max. 451 for the defaults at 44.1 kHz.
    std::size_t num_bins(double sample_rate) const;

    /// 1 / (2^(1/bins_per_octave) - 1)
    double q_factor() const;

    void validate(double sample_rate) const;
};

struct CqtFeatures {
    RealMatrix values;  // bins x frames
    CqtConfig config;
    double sample_rate = 44100.0;
    bool log_compressed = false;

    std::size_t bins() const noexcept { return values.rows(); }
    std::size_t frames() const noexcept { return values.cols(); }
    std::size_t hop() const noexcept { return config.hop; }
};

/// f_min * 2^(k / bins_per_octave)
std::vector<double> cqt_center_frequencies(const CqtConfig& config, double sample_rate);

/// ceil(length / hop); frame j is centered on sample j * hop.
std::size_t cqt_frame_count(std::size_t length, std::size_t hop);

/// Magnitude CQT. A sinusoid of amplitude A centered on bin k reads A / 2 there.
CqtFeatures cqt(std::span<const double> x, double sample_rate, const CqtConfig& config = {});

/// Expected |c_k|^2 for unit-variance white noise input, per bin. Dividing a
/// squared CQT magnitude by this gives a power spectral density estimate in
/// the same units as the input variance.
std::vector<double> cqt_noise_gain(const CqtConfig& config, double sample_rate);

/// log(1 + 1e4 m) / log(1e4), clamped to [0, 1].
CqtFeatures compress_conditioning(const CqtFeatures& features);

}  // namespace stn
