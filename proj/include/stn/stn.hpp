#pragma once

// Sines / transients / noise decomposition with soft spectral masks.

#include <cstddef>
#include <span>
#include <vector>

#include "stn/signal.hpp"
#include "stn/stft.hpp"

namespace stn {

struct MaskParams {
    double beta_upper = 0.8;
    double beta_lower = 0.7;
    std::size_t median_time = 4;   // frames
    std::size_t median_freq = 92;  // bins

    /// Median lengths derived from physical spans (default 200 ms and 500 Hz),
    /// rounded to the nearest even count of at least 2.
    static MaskParams for_geometry(const StftConfig& stft, double sample_rate, double beta_lower,
                                   double beta_upper, double median_time_ms = 200.0,
                                   double median_freq_hz = 500.0);

    /// beta_lower must be at least 0.5 so that at most one of S and T is
    /// nonzero in any bin.
    void validate() const;
};

struct StnMasks {
    RealMatrix sines;
    RealMatrix transients;
    RealMatrix noise;
};

/// Transition function: 0 below beta_lower, 1 at or above beta_upper,
/// sin^2((pi/2) (a - beta_lower) / (beta_upper - beta_lower)) in between.
double soft_mask(double a, double beta_upper, double beta_lower);

/// horizontal / (horizontal + vertical); entries where both are zero are 0.
RealMatrix tonalness(const RealMatrix& horizontal, const RealMatrix& vertical);

/// 1 - tonalness.
RealMatrix transientness(const RealMatrix& tonal);

/// Median-filter |X| along time and frequency and derive S, T and N = 1 - S - T.
/// Bins with no horizontal or vertical evidence (both medians zero) are
/// assigned entirely to N.
StnMasks build_masks(const Spectrogram& spec, const MaskParams& params);

/// istft(mask .* X), phase untouched.
std::vector<double> apply_mask(const Spectrogram& spec, const RealMatrix& mask);

enum class StageTarget { Sines, Transients };

struct StageSplit {
    std::vector<double> extracted;
    std::vector<double> residual;
};

/// One decomposition pass: extracts the S (or T) mask component and returns
/// the complementary-mask remainder as residual.
StageSplit decompose_stage(std::span<const double> x, double sample_rate, const StftConfig& stft,
                           const MaskParams& params, StageTarget target);

struct StageSettings {
    StftConfig stft;
    MaskParams masks;
};

struct TwoStageConfig {
    StageSettings sines_stage;      // long window
    StageSettings transient_stage;  // short window

    /// 8192/2048 with betas (0.7, 0.8) then 512/128 with (0.75, 0.85).
    static TwoStageConfig defaults(double sample_rate);

    void validate() const;
};

struct StnComponents {
    std::vector<double> sines;
    std::vector<double> transients;
    std::vector<double> noise;
};

/// Long-window pass separates sines from the residual; short-window pass
/// splits the residual into transients and noise. The three parts sum to x.
StnComponents decompose_stn(std::span<const double> x, double sample_rate, const TwoStageConfig& config);

}  // namespace stn
