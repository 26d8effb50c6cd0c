#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stn/cqt.hpp"
#include "stn/envelope.hpp"
#include "stn/noise_stretch.hpp"
#include "stn/phase_vocoder.hpp"
#include "stn/signal.hpp"
#include "stn/stn.hpp"
#include "stn/transients.hpp"

namespace stn {

inline constexpr double kMinTsmAlpha = 1.0;
inline constexpr double kMaxTsmAlpha = 16.0;

struct TsmConfig {
    TwoStageConfig decomposition = TwoStageConfig::defaults(44100.0);
    PvConfig phase_vocoder;
    TransientConfig transients;
    CqtConfig cqt;
    SpectralSynthConfig noise_synth;
    NoiseBackend backend = NoiseBackend::Spectral;
    NeuralBackendConfig neural;
    EnvelopeConfig envelope;
    bool envelope_enabled = true;
    std::optional<double> target_lufs = -23.0;  // no normalization when empty

    /// Defaults with median lengths derived for the given sample rate.
    static TsmConfig defaults(double sample_rate);
};

struct TsmRequest {
    Signal input;
    double alpha = 4.0;
    std::uint64_t seed = 0x5eed;
    TsmConfig config;

    void validate() const;
};

/// Per-channel intermediate results. The stretched paths are stored as mixed
/// (after envelope shaping and length reconciliation).
struct ChannelTrace {
    StnComponents components;
    std::vector<TransientEvent> events;
    std::vector<double> sines;
    std::vector<double> transients;
    std::vector<double> noise;
    std::vector<double> envelope_gain;  // empty when shaping is disabled
};

struct TsmResult {
    Signal output;
    std::vector<ChannelTrace> channels;
    std::optional<double> loudness_before;  // LUFS of the unnormalized mix, when normalization ran
    double normalization_gain_db = 0.0;
};

/// Zero-pad or trim to exactly n samples.
std::vector<double> fit_length(std::vector<double> x, std::size_t n);

/// Decompose, stretch each component, shape sines and noise with the
/// dilated envelope of the original sines + noise, mix, then optionally
/// loudness-normalize. Stereo channels are processed independently with
/// identical settings and seeds.
TsmResult tsm(const TsmRequest& request);

/// tsm() restricted to two-channel input.
TsmResult tsm_stereo(const TsmRequest& request);

}  // namespace stn
