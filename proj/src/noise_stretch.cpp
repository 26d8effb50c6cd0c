#include "stn/noise_stretch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "stn/fft.hpp"
#include "stn/stft.hpp"

namespace stn {

namespace {

constexpr std::size_t kFrameBlock = 256;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Interpolation of CQT bins onto linear FFT bins along log frequency.
struct LogInterp {
    std::vector<std::size_t> lower;
    std::vector<double> frac;
};

LogInterp make_interp(const CqtConfig& config, double sample_rate, std::size_t fft_bins, std::size_t fft_size,
                      std::size_t cqt_bins)
{
    LogInterp li;
    li.lower.resize(fft_bins);
    li.frac.resize(fft_bins);
    const double last = static_cast<double>(cqt_bins - 1);
    for (std::size_t b = 0; b < fft_bins; ++b) {
        const double f = static_cast<double>(b) * sample_rate / static_cast<double>(fft_size);
        double u = f > 0.0 ? config.bins_per_octave * std::log2(f / config.f_min) : 0.0;
        u = std::clamp(u, 0.0, last);
        const auto k = std::min(static_cast<std::size_t>(u), cqt_bins > 1 ? cqt_bins - 2 : 0);
        li.lower[b] = k;
        li.frac[b] = cqt_bins > 1 ? u - static_cast<double>(k) : 0.0;
    }
    return li;
}

}  // namespace

void NoiseStretchRequest::validate() const
{
    require(std::isfinite(alpha) && alpha >= kMinNoiseAlpha && alpha <= kMaxNoiseAlpha,
            "noise stretch alpha must lie in [1, 16]");
    require(cqt.hop() == kConditioningHop, "conditioning hop must be 256 samples");
    require(!cqt.log_compressed, "noise stretch needs raw CQT magnitudes");
    require(cqt.frames() > 0 && cqt.bins() > 0, "empty conditioning");
    require(sample_rate > 0.0 && cqt.sample_rate == sample_rate, "conditioning sample rate mismatch");
}

std::size_t samples_per_frame(double alpha, std::size_t hop)
{
    require(hop > 0, "hop must be positive");
    require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
    return static_cast<std::size_t>(std::llround(alpha * static_cast<double>(hop)));
}

std::size_t noise_output_length(std::size_t frames, double alpha, std::size_t hop)
{
    return frames * samples_per_frame(alpha, hop);
}

std::vector<double> stretch_noise_spectral(const NoiseStretchRequest& request, const SpectralSynthConfig& config)
{
    request.validate();
    const StftConfig geometry = {config.window_length, config.hop, WindowType::Hann};
    geometry.validate();

    const auto& features = request.cqt;
    const std::size_t cqt_frames = features.frames();
    const std::size_t cqt_bins = features.bins();
    const std::size_t spf = samples_per_frame(request.alpha, features.hop());
    const std::size_t out_length = cqt_frames * spf;

    // Power spectral density estimate per CQT bin and frame.
    const auto gain = cqt_noise_gain(features.config, request.sample_rate);
    require(gain.size() == cqt_bins, "conditioning bin count does not match its config");
    RealMatrix power(cqt_frames, cqt_bins);
    for (std::size_t k = 0; k < cqt_bins; ++k)
        for (std::size_t j = 0; j < cqt_frames; ++j) {
            const double m = features.values(k, j);
            power(j, k) = gain[k] > 0.0 ? m * m / gain[k] : 0.0;
        }

    const std::size_t n = config.window_length;
    const std::size_t hop = config.hop;
    const RealFft fft(n);
    const auto window = make_window(WindowType::Hann, n);
    const LogInterp interp = make_interp(features.config, request.sample_rate, fft.bins(), n, cqt_bins);

    const std::size_t frames = (out_length + hop - 1) / hop + 1;
    std::vector<double> sum((frames - 1) * hop + n, 0.0);
    std::vector<double> norm(sum.size(), 0.0);
    RealMatrix block(kFrameBlock, n);

    for (std::size_t block_start = 0; block_start < frames; block_start += kFrameBlock) {
        const std::size_t block_frames = std::min(kFrameBlock, frames - block_start);
        const auto count = static_cast<std::ptrdiff_t>(block_frames);
#pragma omp parallel
        {
            std::vector<double> frame_power(cqt_bins);
            std::vector<Complex> spectrum(fft.bins());
            std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
#pragma omp for schedule(static)
            for (std::ptrdiff_t ii = 0; ii < count; ++ii) {
                const std::size_t t = block_start + static_cast<std::size_t>(ii);
                // Conditioning position of this synthesis frame, in input frames.
                const double pos = static_cast<double>(t * hop) / static_cast<double>(spf);
                const auto j0 = std::min(static_cast<std::size_t>(pos), cqt_frames - 1);
                const std::size_t j1 = std::min(j0 + 1, cqt_frames - 1);
                const double w1 = std::clamp(pos - static_cast<double>(j0), 0.0, 1.0);
                for (std::size_t k = 0; k < cqt_bins; ++k)
                    frame_power[k] = (1.0 - w1) * power(j0, k) + w1 * power(j1, k);

                std::mt19937_64 rng(splitmix64(request.seed ^ splitmix64(t)));
                for (std::size_t b = 0; b < spectrum.size(); ++b) {
                    const std::size_t k = interp.lower[b];
                    const std::size_t k1 = std::min(k + 1, cqt_bins - 1);
                    const double p = (1.0 - interp.frac[b]) * frame_power[k] + interp.frac[b] * frame_power[k1];
                    const double amplitude = std::sqrt(static_cast<double>(n) * std::max(p, 0.0));
                    const double phase = uniform(rng);
                    if (b == 0 || b + 1 == spectrum.size())
                        spectrum[b] = phase < std::numbers::pi ? amplitude : -amplitude;  // real-valued bins
                    else
                        spectrum[b] = std::polar(amplitude, phase);
                }

                auto row = block.row(static_cast<std::size_t>(ii));
                fft.inverse(spectrum, row);
                for (std::size_t i = 0; i < n; ++i) row[i] *= window[i];
            }
        }
        for (std::size_t ii = 0; ii < block_frames; ++ii) {
            const std::size_t start = (block_start + ii) * hop;
            const auto row = block.row(ii);
            for (std::size_t i = 0; i < n; ++i) {
                sum[start + i] += row[i];
                norm[start + i] += window[i] * window[i];
            }
        }
    }

    // Frames carry independent phases, so their powers (not amplitudes) add.
    std::vector<double> out(out_length);
    for (std::size_t i = 0; i < out_length; ++i) {
        const std::size_t j = i + n / 2;
        out[i] = norm[j] > 0.0 ? sum[j] / std::sqrt(norm[j]) : 0.0;
    }
    return out;
}

std::vector<double> stretch_noise(const NoiseStretchRequest& request, const SpectralSynthConfig& spectral,
                                  const NeuralBackendConfig& neural)
{
    return request.backend == NoiseBackend::Spectral ? stretch_noise_spectral(request, spectral)
                                                     : stretch_noise_neural(request, neural);
}

}  // namespace stn
