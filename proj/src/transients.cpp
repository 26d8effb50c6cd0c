#include "stn/transients.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <ostream>

#include "stn/error.hpp"
#include "stn/logging.hpp"

namespace stn {

std::vector<double> rms_envelope(std::span<const double> x, std::size_t window, std::size_t hop)
{
    require(window > 0 && hop > 0, "envelope window and hop must be positive");
    const std::size_t frames = x.empty() ? 0 : (x.size() + hop - 1) / hop;
    std::vector<double> env(frames, 0.0);
    for (std::size_t j = 0; j < frames; ++j) {
        const std::size_t begin = j * hop;
        const std::size_t end = std::min(x.size(), begin + window);
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += x[i] * x[i];
        env[j] = std::sqrt(acc / static_cast<double>(end - begin));
    }
    return env;
}

namespace {

double median_of(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

}  // namespace

std::vector<TransientEvent> detect_transients(std::span<const double> x, double sample_rate,
                                              const TransientConfig& config)
{
    require(sample_rate > 0.0, "sample rate must be positive");
    const std::size_t hop = config.envelope_hop;
    const std::size_t win = config.envelope_window;
    const auto env = rms_envelope(x, win, hop);
    if (env.empty()) return {};

    const double floor = std::pow(10.0, config.floor_dbfs / 20.0);
    const double strongest = *std::max_element(env.begin(), env.end());
    const double relative = strongest * std::pow(10.0, config.relative_floor_db / 20.0);
    const double threshold = std::max({median_of(env) * config.median_factor, floor, relative});

    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < env.size(); ++j) {
        if (env[j] <= threshold) continue;
        const bool rising = j == 0 || env[j] > env[j - 1];
        const bool not_falling_after = j + 1 == env.size() || env[j] >= env[j + 1];
        if (rising && not_falling_after) candidates.push_back(j);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return env[a] > env[b]; });

    const auto cap = static_cast<std::size_t>(std::llround(config.max_extent_seconds * sample_rate));
    std::vector<TransientEvent> events;
    for (std::size_t j : candidates) {
        const std::size_t frame_begin = j * hop;
        const std::size_t frame_end = std::min(x.size(), frame_begin + win);

        const bool claimed = std::any_of(events.begin(), events.end(), [&](const TransientEvent& e) {
            return frame_begin < e.end && frame_end > e.start;
        });
        if (claimed) continue;

        std::size_t onset = frame_begin;
        for (std::size_t i = frame_begin; i < frame_end; ++i)
            if (std::abs(x[i]) > std::abs(x[onset])) onset = i;

        const double level = config.extent_fraction * env[j];
        std::size_t left = j;
        while (left > 0 && env[left - 1] >= level) --left;
        std::size_t right = j;
        while (right + 1 < env.size() && env[right + 1] >= level) ++right;

        TransientEvent e;
        e.onset = onset;
        e.start = left > 0 ? (left - 1) * hop : 0;
        e.end = std::min(x.size(), (right + 1) * hop + win);
        e.start = std::max(e.start, onset > cap ? onset - cap : 0);
        e.end = std::min(e.end, onset + cap + 1);
        for (const auto& other : events) {
            if (other.end <= onset) e.start = std::max(e.start, other.end);
            if (other.start > onset) e.end = std::min(e.end, other.start);
        }

        double energy = 0.0;
        for (std::size_t i = frame_begin; i < frame_end; ++i) energy += x[i] * x[i];
        e.peak_energy = energy;
        events.push_back(e);
    }

    std::sort(events.begin(), events.end(),
              [](const TransientEvent& a, const TransientEvent& b) { return a.onset < b.onset; });
    return events;
}

std::vector<double> relocate_transients(std::span<const double> x, std::span<const TransientEvent> events,
                                        double alpha, std::size_t out_length, double sample_rate,
                                        const TransientConfig& config)
{
    require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
    std::vector<double> out(out_length, 0.0);
    const auto fade = static_cast<long long>(std::llround(config.crossfade_seconds * sample_rate));

    long long placed_end = std::numeric_limits<long long>::min();
    for (const auto& e : events) {
        require(e.start <= e.onset && e.onset < e.end && e.end <= x.size(), "transient event outside the signal");
        const long long target = std::llround(alpha * static_cast<double>(e.onset));
        const long long dest_start = target - static_cast<long long>(e.onset - e.start);
        const long long length = static_cast<long long>(e.end - e.start);

        if (dest_start < 0 || dest_start + length > static_cast<long long>(out_length))
            log().warn("transient at sample {} clipped at the output boundary", e.onset);

        const long long overlap_end = std::min(placed_end, dest_start + length);
        const long long fade_len = std::min(fade, overlap_end - dest_start);
        for (long long i = 0; i < length; ++i) {
            const long long n = dest_start + i;
            if (n < 0 || n >= static_cast<long long>(out_length)) continue;
            const double v = x[e.start + static_cast<std::size_t>(i)];
            auto& o = out[static_cast<std::size_t>(n)];
            if (n < overlap_end && i < fade_len) {
                const double r = 0.5 - 0.5 * std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                                      static_cast<double>(fade_len));
                o = o * (1.0 - r) + v * r;
            } else {
                o = v;
            }
        }
        placed_end = std::max(placed_end, dest_start + length);
    }
    return out;
}

void write_events_csv(std::ostream& os, std::span<const TransientEvent> events, double sample_rate)
{
    os << "onset_seconds,peak_energy\n";
    for (const auto& e : events) os << static_cast<double>(e.onset) / sample_rate << ',' << e.peak_energy << '\n';
}

}  // namespace stn
