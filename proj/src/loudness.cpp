#include "stn/loudness.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace stn {

namespace {

struct Biquad {
    double b0, b1, b2, a1, a2;

    void run(std::vector<double>& x) const
    {
        double z1 = 0.0, z2 = 0.0;
        for (double& v : x) {
            const double out = b0 * v + z1;
            z1 = b1 * v - a1 * out + z2;
            z2 = b2 * v - a2 * out;
            v = out;
        }
    }
};

// K-weighting designed for an arbitrary rate; reproduces the tabulated
// 48 kHz coefficients of the recommendation.
Biquad shelf_stage(double fs)
{
    const double f0 = 1681.974450955533;
    const double gain_db = 3.999843853973347;
    const double q = 0.7071752369554196;
    const double k = std::tan(std::numbers::pi * f0 / fs);
    const double vh = std::pow(10.0, gain_db / 20.0);
    const double vb = std::pow(vh, 0.4996667741545416);
    const double a0 = 1.0 + k / q + k * k;
    return {(vh + vb * k / q + k * k) / a0, 2.0 * (k * k - vh) / a0, (vh - vb * k / q + k * k) / a0,
            2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0};
}

Biquad highpass_stage(double fs)
{
    const double f0 = 38.13547087602444;
    const double q = 0.5003270373238773;
    const double k = std::tan(std::numbers::pi * f0 / fs);
    const double a0 = 1.0 + k / q + k * k;
    return {1.0, -2.0, 1.0, 2.0 * (k * k - 1.0) / a0, (1.0 - k / q + k * k) / a0};
}

constexpr double kOffset = -0.691;
constexpr double kAbsoluteGate = -70.0;
constexpr double kRelativeGate = -10.0;

}  // namespace

double integrated_loudness(const Signal& signal)
{
    signal.validate();
    const double fs = signal.sample_rate;
    const auto block = static_cast<std::size_t>(std::llround(0.4 * fs));
    const auto step = static_cast<std::size_t>(std::llround(0.1 * fs));
    if (signal.length() < block) throw UnmeasurableLoudness();
    const std::size_t blocks = (signal.length() - block) / step + 1;

    const Biquad shelf = shelf_stage(fs);
    const Biquad highpass = highpass_stage(fs);
    std::vector<double> power(blocks, 0.0);  // sum over channels of the block mean square
    for (const auto& ch : signal.channels) {
        std::vector<double> y(ch);
        shelf.run(y);
        highpass.run(y);
        std::vector<double> prefix(y.size() + 1, 0.0);
        for (std::size_t i = 0; i < y.size(); ++i) prefix[i + 1] = prefix[i] + y[i] * y[i];
        for (std::size_t j = 0; j < blocks; ++j)
            power[j] += (prefix[j * step + block] - prefix[j * step]) / static_cast<double>(block);
    }

    auto loudness_of = [](double p) { return kOffset + 10.0 * std::log10(p); };
    auto gated_mean = [&](double threshold, std::size_t& count) {
        double acc = 0.0;
        count = 0;
        for (double p : power)
            if (p > 0.0 && loudness_of(p) > threshold) {
                acc += p;
                ++count;
            }
        return count ? acc / static_cast<double>(count) : 0.0;
    };

    std::size_t count = 0;
    const double absolute_mean = gated_mean(kAbsoluteGate, count);
    if (count == 0) throw UnmeasurableLoudness();
    const double relative = loudness_of(absolute_mean) + kRelativeGate;
    const double gated = gated_mean(std::max(relative, kAbsoluteGate), count);
    if (count == 0) throw UnmeasurableLoudness();
    return loudness_of(gated);
}

Signal loudness_normalize(const Signal& signal, double target_lufs)
{
    const double gain = std::pow(10.0, (target_lufs - integrated_loudness(signal)) / 20.0);
    Signal out = signal;
    for (auto& ch : out.channels)
        for (double& v : ch) v *= gain;
    return out;
}

}  // namespace stn
