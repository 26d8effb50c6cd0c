#include "stn/stft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "stn/fft.hpp"
#include "stn/kernels.hpp"

namespace stn {

namespace {

constexpr double kMaxColaRipple = 1e-10;

}  // namespace

std::vector<double> make_window(WindowType type, std::size_t n)
{
    std::vector<double> w(n, 1.0);
    if (type == WindowType::Hann) {
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }
    return w;
}

double cola_ripple(std::span<const double> window, std::size_t hop)
{
    require(hop > 0 && hop <= window.size(), "hop must be in (0, window_length]");
    std::vector<double> sum(hop, 0.0);
    for (std::size_t i = 0; i < window.size(); ++i) sum[i % hop] += window[i] * window[i];
    const auto [lo, hi] = std::minmax_element(sum.begin(), sum.end());
    if (*lo <= 0.0) return std::numeric_limits<double>::infinity();
    return *hi / *lo - 1.0;
}

void StftConfig::validate() const
{
    require(window_length >= 2 && std::has_single_bit(window_length), "window length must be a power of two");
    require(hop > 0 && hop <= window_length, "hop must be in (0, window_length]");
    const auto w = make_window(window, window_length);
    require(cola_ripple(w, hop) <= kMaxColaRipple, "window/hop pair does not overlap-add to a constant");
}

std::size_t stft_frame_count(std::size_t length, std::size_t hop)
{
    return (length + hop - 1) / hop + 1;
}

Spectrogram stft(std::span<const double> x, const StftConfig& config, double sample_rate)
{
    require(!x.empty(), "stft of an empty signal");
    require(sample_rate > 0.0, "sample rate must be positive");
    config.validate();

    const std::size_t n = config.window_length;
    const std::size_t frames = stft_frame_count(x.size(), config.hop);
    std::vector<double> padded((frames - 1) * config.hop + n, 0.0);
    std::copy(x.begin(), x.end(), padded.begin() + static_cast<std::ptrdiff_t>(n / 2));

    Spectrogram spec;
    spec.config = config;
    spec.sample_rate = sample_rate;
    spec.original_length = x.size();
    spec.values = ComplexMatrix(frames, config.bins());

    const RealFft fft(n);
    const auto window = make_window(config.window, n);
    kernels::omp::analyze_frames(padded, window, config.hop, fft, spec.values);
    return spec;
}

Spectrogram stft(const Signal& signal, const StftConfig& config)
{
    require(signal.num_channels() == 1, "stft requires a mono signal");
    return stft(signal.channel(0), config, signal.sample_rate);
}

std::vector<double> istft(const Spectrogram& spec)
{
    const auto& config = spec.config;
    config.validate();
    require(spec.original_length > 0, "spectrogram has no original length");
    require(spec.bins() == config.bins(), "spectrogram bin count does not match its window length");
    require(spec.frames() == stft_frame_count(spec.original_length, config.hop),
            "spectrogram frame count does not match its original length");

    const std::size_t n = config.window_length;
    const RealFft fft(n);
    const auto window = make_window(config.window, n);

    RealMatrix frames;
    kernels::omp::synthesize_frames(spec.values, window, fft, frames);

    const std::size_t padded_length = (spec.frames() - 1) * config.hop + n;
    std::vector<double> sum(padded_length, 0.0);
    std::vector<double> norm(padded_length, 0.0);
    for (std::size_t m = 0; m < spec.frames(); ++m) {
        const auto frame = frames.row(m);
        const std::size_t start = m * config.hop;
        for (std::size_t i = 0; i < n; ++i) {
            sum[start + i] += frame[i];
            norm[start + i] += window[i] * window[i];
        }
    }

    std::vector<double> out(spec.original_length);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t j = i + n / 2;
        out[i] = norm[j] > 0.0 ? sum[j] / norm[j] : 0.0;
    }
    return out;
}

RealMatrix magnitude(const Spectrogram& spec)
{
    RealMatrix mag(spec.frames(), spec.bins());
    const auto& src = spec.values.data();
    auto& dst = mag.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::abs(src[i]);
    return mag;
}

}  // namespace stn
