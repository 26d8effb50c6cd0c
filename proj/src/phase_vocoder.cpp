#include "stn/phase_vocoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#include "stn/error.hpp"
#include "stn/fft.hpp"
#include "stn/stft.hpp"

namespace stn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double phase)
{
    return std::remainder(phase, kTwoPi);
}

}  // namespace

void PvConfig::validate() const
{
    require(window_length >= 4 && std::has_single_bit(window_length), "PV window length must be a power of two");
    require(synthesis_hop > 0 && synthesis_hop <= window_length / 2, "PV synthesis hop must be in (0, window/2]");
    const auto w = make_window(WindowType::Hann, window_length);
    require(cola_ripple(w, synthesis_hop) <= 1e-10, "PV synthesis hop does not overlap-add to a constant");
}

std::size_t stretched_length(std::size_t length, double alpha)
{
    return static_cast<std::size_t>(std::llround(alpha * static_cast<double>(length)));
}

std::vector<std::size_t> find_spectral_peaks(std::span<const double> magnitude)
{
    std::vector<std::size_t> peaks;
    const std::size_t n = magnitude.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double v = magnitude[k];
        bool is_peak = true;
        for (std::size_t d = 1; d <= 2 && is_peak; ++d) {
            if (k >= d && magnitude[k - d] >= v) is_peak = false;
            if (k + d < n && magnitude[k + d] >= v) is_peak = false;
        }
        if (is_peak) peaks.push_back(k);
    }
    return peaks;
}

std::vector<std::size_t> peak_regions(std::span<const double> magnitude, std::span<const std::size_t> peaks)
{
    std::vector<std::size_t> owner(magnitude.size(), 0);
    if (peaks.empty()) return owner;
    std::size_t start = 0;
    for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
        const auto lo = magnitude.begin() + static_cast<std::ptrdiff_t>(peaks[i]) + 1;
        const auto hi = magnitude.begin() + static_cast<std::ptrdiff_t>(peaks[i + 1]);
        const auto split = static_cast<std::size_t>(std::min_element(lo, hi) - magnitude.begin());
        std::fill(owner.begin() + static_cast<std::ptrdiff_t>(start), owner.begin() + static_cast<std::ptrdiff_t>(split), i);
        start = split;
    }
    std::fill(owner.begin() + static_cast<std::ptrdiff_t>(start), owner.end(), peaks.size() - 1);
    return owner;
}

std::vector<double> stretch_sines(std::span<const double> x, double alpha, const PvConfig& config)
{
    require(std::isfinite(alpha) && alpha >= kMinPvAlpha && alpha <= kMaxPvAlpha,
            "alpha outside the supported range [0.25, 16]");
    config.validate();
    const std::size_t out_length = stretched_length(x.size(), alpha);
    if (x.empty()) return {};

    const std::size_t n = config.window_length;
    const std::size_t half = n / 2;
    const std::size_t bins = n / 2 + 1;
    const std::size_t hop_out = config.synthesis_hop;
    const std::size_t frames = (out_length + hop_out - 1) / hop_out + 1;
    const auto window = make_window(WindowType::Hann, n);
    const RealFft fft(n);

    std::vector<double> sum((frames - 1) * hop_out + n, 0.0);
    std::vector<double> norm(sum.size(), 0.0);

    std::vector<double> frame(n);
    std::vector<std::complex<double>> spectrum(bins);
    std::vector<double> mag(bins), phase(bins), prev_phase(bins), synth_phase(bins), new_phase(bins);
    std::vector<double> rotation;
    std::vector<double> out_frame(n);

    auto analysis_center = [&](std::size_t m) {
        return std::llround(static_cast<double>(m) * static_cast<double>(hop_out) / alpha);
    };

    const double hop_s = static_cast<double>(hop_out);
    long long prev_center = 0;
    for (std::size_t m = 0; m < frames; ++m) {
        const long long center = analysis_center(m);
        const long long first = center - static_cast<long long>(half);
        for (std::size_t i = 0; i < n; ++i) {
            const long long j = first + static_cast<long long>(i);
            const double v = (j >= 0 && j < static_cast<long long>(x.size())) ? x[static_cast<std::size_t>(j)] : 0.0;
            frame[i] = v * window[i];
        }
        fft.forward(frame, spectrum);
        for (std::size_t k = 0; k < bins; ++k) {
            mag[k] = std::abs(spectrum[k]);
            phase[k] = std::arg(spectrum[k]);
        }

        if (m == 0) {
            new_phase = phase;
        } else {
            const double hop_a = static_cast<double>(center - prev_center);
            auto advance = [&](std::size_t k) {
                const double omega = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
                if (hop_a <= 0.0) return synth_phase[k] + omega * hop_s;
                const double deviation = wrap_phase(phase[k] - prev_phase[k] - omega * hop_a);
                return synth_phase[k] + (omega + deviation / hop_a) * hop_s;
            };

            const auto peaks = find_spectral_peaks(mag);
            if (peaks.empty()) {
                for (std::size_t k = 0; k < bins; ++k) new_phase[k] = advance(k);
            } else {
                rotation.resize(peaks.size());
                for (std::size_t i = 0; i < peaks.size(); ++i) rotation[i] = advance(peaks[i]) - phase[peaks[i]];
                const auto owner = peak_regions(mag, peaks);
                for (std::size_t k = 0; k < bins; ++k) new_phase[k] = phase[k] + rotation[owner[k]];
            }
        }

        for (std::size_t k = 0; k < bins; ++k) {
            synth_phase[k] = wrap_phase(new_phase[k]);
            spectrum[k] = std::polar(mag[k], synth_phase[k]);
        }
        prev_phase = phase;
        prev_center = center;

        fft.inverse(spectrum, out_frame);
        const std::size_t start = m * hop_out;
        for (std::size_t i = 0; i < n; ++i) {
            sum[start + i] += out_frame[i] * window[i];
            norm[start + i] += window[i] * window[i];
        }
    }

    std::vector<double> out(out_length);
    for (std::size_t i = 0; i < out_length; ++i) {
        const std::size_t j = i + half;
        out[i] = norm[j] > 0.0 ? sum[j] / norm[j] : 0.0;
    }
    return out;
}

}  // namespace stn
