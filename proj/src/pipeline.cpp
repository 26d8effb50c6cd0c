#include "stn/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <future>

#include "stn/logging.hpp"
#include "stn/loudness.hpp"

namespace stn {

namespace {

ChannelTrace process_channel(std::span<const double> x, double sample_rate, double alpha, std::uint64_t seed,
                             const TsmConfig& config)
{
    ChannelTrace trace;
    trace.components = decompose_stn(x, sample_rate, config.decomposition);
    const auto& parts = trace.components;
    const std::size_t target = stretched_length(x.size(), alpha);

    trace.sines = fit_length(stretch_sines(parts.sines, alpha, config.phase_vocoder), target);

    trace.events = detect_transients(parts.transients, sample_rate, config.transients);
    trace.transients = relocate_transients(parts.transients, trace.events, alpha, target, sample_rate, config.transients);

    NoiseStretchRequest noise_request;
    noise_request.noise = parts.noise;
    noise_request.sample_rate = sample_rate;
    noise_request.alpha = alpha;
    noise_request.backend = config.backend;
    noise_request.seed = seed;
    noise_request.cqt = cqt(parts.noise, sample_rate, config.cqt);
    trace.noise = fit_length(stretch_noise(noise_request, config.noise_synth, config.neural), target);

    if (config.envelope_enabled) {
        std::vector<double> reference(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) reference[i] = parts.sines[i] + parts.noise[i];
        const EnvelopeCurve envelope = extract_envelope(reference, config.envelope);

        std::vector<double> shaped(target);
        for (std::size_t i = 0; i < target; ++i) shaped[i] = trace.sines[i] + trace.noise[i];
        trace.envelope_gain = envelope_gain(shaped, envelope, alpha, config.envelope);
        for (std::size_t i = 0; i < target; ++i) {
            trace.sines[i] *= trace.envelope_gain[i];
            trace.noise[i] *= trace.envelope_gain[i];
        }
    }
    return trace;
}

template <typename E>
[[noreturn]] void rethrow_with_channel(const E& e, std::size_t channel)
{
    const std::string prefix = "channel " + std::to_string(channel) + ": ";
    if constexpr (std::is_same_v<E, BackendError>)
        throw BackendError(e.kind(), prefix + e.what());
    else
        throw E(prefix + e.what());
}

}  // namespace

TsmConfig TsmConfig::defaults(double sample_rate)
{
    TsmConfig c;
    c.decomposition = TwoStageConfig::defaults(sample_rate);
    return c;
}

void TsmRequest::validate() const
{
    input.validate();
    require(input.length() > 0, "empty input signal");
    require(std::isfinite(alpha) && alpha >= kMinTsmAlpha && alpha <= kMaxTsmAlpha, "alpha must lie in [1, 16]");
}

std::vector<double> fit_length(std::vector<double> x, std::size_t n)
{
    x.resize(n, 0.0);
    return x;
}

TsmResult tsm(const TsmRequest& request)
{
    request.validate();
    const double fs = request.input.sample_rate;
    const std::size_t channels = request.input.num_channels();

    std::vector<std::future<ChannelTrace>> jobs;
    for (std::size_t c = 0; c < channels; ++c)
        jobs.push_back(std::async(channels > 1 ? std::launch::async : std::launch::deferred, process_channel,
                                  request.input.channel(c), fs, request.alpha, request.seed,
                                  std::cref(request.config)));

    TsmResult result;
    for (std::size_t c = 0; c < channels; ++c) {
        try {
            result.channels.push_back(jobs[c].get());
        } catch (const BackendError& e) {
            rethrow_with_channel(e, c);
        } catch (const InvalidArgument& e) {
            rethrow_with_channel(e, c);
        }
    }

    result.output.sample_rate = request.input.sample_rate;
    for (const auto& trace : result.channels) {
        std::vector<double> mix(trace.sines.size());
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = trace.sines[i] + trace.transients[i] + trace.noise[i];
        result.output.channels.push_back(std::move(mix));
    }

    if (request.config.target_lufs) {
        try {
            const double before = integrated_loudness(result.output);
            result.loudness_before = before;
            result.normalization_gain_db = *request.config.target_lufs - before;
            result.output = loudness_normalize(result.output, *request.config.target_lufs);
        } catch (const UnmeasurableLoudness&) {
            log().warn("output loudness is unmeasurable; skipping normalization");
        }
    }
    return result;
}

TsmResult tsm_stereo(const TsmRequest& request)
{
    require(request.input.num_channels() == 2, "tsm_stereo requires a two-channel signal");
    return tsm(request);
}

}  // namespace stn
