#pragma once

#include <optional>
#include <span>
#include <vector>

#include "stn/signal.hpp"
#include "stn/transients.hpp"

namespace stn {

struct ThirdOctaveBand {
    double center_hz = 0.0;
    double power = 0.0;  // mean power density over the band
};

/// Long-term Welch spectrum (Hann 4096, hop 2048) pooled into base-10
/// third-octave bands whose centers lie in [f_lo, f_hi].
std::vector<ThirdOctaveBand> third_octave_spectrum(std::span<const double> x, double sample_rate, double f_lo = 100.0,
                                                   double f_hi = 16000.0);

struct SpectralDistance {
    double distance_db = 0.0;      // mean |band difference| after removing the level offset
    double max_deviation_db = 0.0; // worst band after removing the level offset
    double level_offset_db = 0.0;  // mean band difference b - a
    std::size_t bands = 0;
};

/// Compares third-octave spectra over bands where both inputs carry power.
SpectralDistance spectral_distance(std::span<const double> a, std::span<const double> b, double sample_rate);

struct OnsetMappingError {
    std::size_t matched = 0;
    double mean_ms = 0.0;
    double max_ms = 0.0;
};

/// Both signals are decomposed and onsets are detected on their transient
/// components. Each original onset is mapped to alpha * onset and paired with
/// the nearest stretched onset.
OnsetMappingError onset_mapping_error(std::span<const double> original, std::span<const double> stretched,
                                      double alpha, double sample_rate, const TransientConfig& config = {});

struct MetricsReport {
    double length_ratio = 0.0;
    SpectralDistance spectrum;
    OnsetMappingError onsets;
    std::optional<double> loudness_original;
    std::optional<double> loudness_stretched;
};

/// Compares the channel mixdowns of both signals. Sample rates must match.
MetricsReport compare(const Signal& original, const Signal& stretched, double alpha);

}  // namespace stn
