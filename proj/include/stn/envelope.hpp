#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stn {

struct EnvelopeConfig {
    std::size_t window = 512;
    std::size_t hop = 128;
    double gain_floor = 1e-6;
    double max_gain = 4.0;
};

/// RMS amplitude envelope sampled at j * frame_hop.
struct EnvelopeCurve {
    std::vector<double> values;
    std::size_t frame_hop = 128;

    /// Linear interpolation between frame centers, held constant past either end.
    double at(double sample) const;
};

/// values[j] is the smaller RMS of the windows ending and starting at j * hop, so the curve is
/// zero right up to an onset and right after an offset. Near either end only the window that
/// fits is used.
EnvelopeCurve extract_envelope(std::span<const double> x, const EnvelopeConfig& config = {});

/// g(n) = target(n / alpha) / max(env_y(n), gain_floor), clamped to [0, max_gain].
std::vector<double> envelope_gain(std::span<const double> y, const EnvelopeCurve& target, double alpha,
                                  const EnvelopeConfig& config = {});

std::vector<double> apply_envelope(std::span<const double> y, const EnvelopeCurve& target, double alpha,
                                   const EnvelopeConfig& config = {});

}  // namespace stn
