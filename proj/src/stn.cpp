#include "stn/stn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stn/kernels.hpp"
#include "stn/median.hpp"

namespace stn {

namespace {

std::size_t nearest_even(double count)
{
    const auto even = static_cast<std::size_t>(std::llround(count / 2.0)) * 2;
    return std::max<std::size_t>(even, 2);
}

}  // namespace

MaskParams MaskParams::for_geometry(const StftConfig& stft, double sample_rate, double beta_lower,
                                    double beta_upper, double median_time_ms, double median_freq_hz)
{
    MaskParams p;
    p.beta_lower = beta_lower;
    p.beta_upper = beta_upper;
    const double frame_seconds = static_cast<double>(stft.hop) / sample_rate;
    const double bin_hz = sample_rate / static_cast<double>(stft.window_length);
    p.median_time = nearest_even(median_time_ms * 1e-3 / frame_seconds);
    p.median_freq = nearest_even(median_freq_hz / bin_hz);
    return p;
}

void MaskParams::validate() const
{
    require(beta_upper > 0.0 && beta_upper <= 1.0, "beta_upper must lie in (0, 1]");
    require(beta_lower >= 0.5 && beta_lower < beta_upper, "beta_lower must lie in [0.5, beta_upper)");
    require(median_time >= 1 && median_freq >= 1, "median lengths must be positive");
}

double soft_mask(double a, double beta_upper, double beta_lower)
{
    if (a >= beta_upper) return 1.0;
    if (a < beta_lower) return 0.0;
    const double t = (a - beta_lower) / (beta_upper - beta_lower);
    // sin^2(pi t / 2) written so that t = 0 and t = 1/2 evaluate exactly.
    return 0.5 + 0.5 * std::sin(std::numbers::pi * (t - 0.5));
}

RealMatrix tonalness(const RealMatrix& horizontal, const RealMatrix& vertical)
{
    require(horizontal.same_shape(vertical), "tonalness: shape mismatch");
    RealMatrix out(horizontal.rows(), horizontal.cols());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double h = horizontal.data()[i];
        const double v = vertical.data()[i];
        require(h >= 0.0 && v >= 0.0, "tonalness: inputs must be nonnegative");
        out.data()[i] = h + v > 0.0 ? h / (h + v) : 0.0;
    }
    return out;
}

RealMatrix transientness(const RealMatrix& tonal)
{
    RealMatrix out(tonal.rows(), tonal.cols());
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = 1.0 - tonal.data()[i];
    return out;
}

StnMasks build_masks(const Spectrogram& spec, const MaskParams& params)
{
    params.validate();
    const RealMatrix mag = magnitude(spec);
    for (double v : mag.data()) require(std::isfinite(v), "spectrogram contains non-finite values");
    const RealMatrix horizontal = median_filter_time(mag, params.median_time);
    const RealMatrix vertical = median_filter_freq(mag, params.median_freq);

    StnMasks masks;
    kernels::omp::soft_masks(horizontal, vertical, params.beta_lower, params.beta_upper,
                             {masks.sines, masks.transients, masks.noise});
    return masks;
}

std::vector<double> apply_mask(const Spectrogram& spec, const RealMatrix& mask)
{
    require(mask.rows() == spec.frames() && mask.cols() == spec.bins(), "mask shape does not match spectrogram");
    Spectrogram masked = spec;
    auto& values = masked.values.data();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] *= mask.data()[i];
    return istft(masked);
}

StageSplit decompose_stage(std::span<const double> x, double sample_rate, const StftConfig& stft_config,
                           const MaskParams& params, StageTarget target)
{
    const Spectrogram spec = stft(x, stft_config, sample_rate);
    StnMasks masks = build_masks(spec, params);
    RealMatrix& keep = target == StageTarget::Sines ? masks.sines : masks.transients;

    RealMatrix rest(keep.rows(), keep.cols());
    for (std::size_t i = 0; i < rest.size(); ++i) rest.data()[i] = 1.0 - keep.data()[i];

    return {apply_mask(spec, keep), apply_mask(spec, rest)};
}

TwoStageConfig TwoStageConfig::defaults(double sample_rate)
{
    TwoStageConfig c;
    c.sines_stage.stft = StftConfig::hann(8192);
    c.sines_stage.masks = MaskParams::for_geometry(c.sines_stage.stft, sample_rate, 0.7, 0.8);
    c.transient_stage.stft = StftConfig::hann(512);
    c.transient_stage.masks = MaskParams::for_geometry(c.transient_stage.stft, sample_rate, 0.75, 0.85);
    return c;
}

void TwoStageConfig::validate() const
{
    sines_stage.stft.validate();
    transient_stage.stft.validate();
    sines_stage.masks.validate();
    transient_stage.masks.validate();
    require(sines_stage.stft.window_length > transient_stage.stft.window_length,
            "the sines stage must use a longer window than the transient stage");
}

StnComponents decompose_stn(std::span<const double> x, double sample_rate, const TwoStageConfig& config)
{
    config.validate();
    auto first = decompose_stage(x, sample_rate, config.sines_stage.stft, config.sines_stage.masks,
                                 StageTarget::Sines);
    auto second = decompose_stage(first.residual, sample_rate, config.transient_stage.stft,
                                  config.transient_stage.masks, StageTarget::Transients);
    return {std::move(first.extracted), std::move(second.extracted), std::move(second.residual)};
}

}  // namespace stn
