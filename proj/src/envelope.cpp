#include "stn/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "stn/error.hpp"

namespace stn {

double EnvelopeCurve::at(double sample) const
{
    if (values.empty()) return 0.0;
    const double pos = sample / static_cast<double>(frame_hop);
    if (pos <= 0.0) return values.front();
    const auto j = static_cast<std::size_t>(pos);
    if (j + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(j);
    return (1.0 - frac) * values[j] + frac * values[j + 1];
}

EnvelopeCurve extract_envelope(std::span<const double> x, const EnvelopeConfig& config)
{
    require(config.window > 0 && config.hop > 0, "envelope window and hop must be positive");
    EnvelopeCurve env;
    env.frame_hop = config.hop;
    if (x.empty()) return env;

    // Prefix sums of squares make every window O(1).
    std::vector<double> prefix(x.size() + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];

    const std::size_t frames = (x.size() + config.hop - 1) / config.hop + 1;
    env.values.resize(frames);
    const auto rms = [&](std::size_t lo, std::size_t hi) {
        return hi > lo ? std::sqrt(std::max(0.0, prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo)) : 0.0;
    };
    for (std::size_t j = 0; j < frames; ++j) {
        const std::size_t pos = std::min(j * config.hop, x.size());
        const bool full_before = pos >= config.window;
        const bool full_after = pos + config.window <= x.size();
        const std::size_t lo = full_before ? pos - config.window : 0;
        const std::size_t hi = std::min(pos + config.window, x.size());
        if (full_before && full_after) env.values[j] = std::min(rms(lo, pos), rms(pos, hi));
        else if (full_before) env.values[j] = rms(lo, pos);
        else if (full_after) env.values[j] = rms(pos, hi);
        else env.values[j] = rms(lo, hi);
    }
    return env;
}

std::vector<double> envelope_gain(std::span<const double> y, const EnvelopeCurve& target, double alpha,
                                  const EnvelopeConfig& config)
{
    require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
    const EnvelopeCurve current = extract_envelope(y, config);
    std::vector<double> gain(y.size());
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double want = target.at(static_cast<double>(n) / alpha);
        const double have = std::max(current.at(static_cast<double>(n)), config.gain_floor);
        gain[n] = std::clamp(want / have, 0.0, config.max_gain);
    }
    return gain;
}

std::vector<double> apply_envelope(std::span<const double> y, const EnvelopeCurve& target, double alpha,
                                   const EnvelopeConfig& config)
{
    auto gain = envelope_gain(y, target, alpha, config);
    for (std::size_t n = 0; n < y.size(); ++n) gain[n] *= y[n];
    return gain;
}

}  // namespace stn
