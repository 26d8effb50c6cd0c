#include "stn/resample.hpp"

#include <cmath>
#include <numbers>

namespace stn {

namespace {

constexpr int kHalfTaps = 32;
constexpr double kKaiserBeta = 8.6;

double bessel_i0(double x)
{
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 50; ++k) {
        term *= (x / (2.0 * k)) * (x / (2.0 * k));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

}  // namespace

std::vector<double> resample(std::span<const double> x, double from_rate, double to_rate)
{
    require(from_rate > 0.0 && to_rate > 0.0, "sample rates must be positive");
    if (from_rate == to_rate) return {x.begin(), x.end()};

    const double ratio = to_rate / from_rate;
    const double scale = std::min(1.0, ratio);
    const double cutoff = 0.5 * scale * 0.97;  // cycles per input sample
    const double half_width = kHalfTaps / scale;
    const double i0_beta = bessel_i0(kKaiserBeta);

    const auto out_len = static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) * ratio));
    std::vector<double> out(out_len, 0.0);
    const auto n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static)
    for (long long m = 0; m < static_cast<long long>(out_len); ++m) {
        const double t = static_cast<double>(m) / ratio;
        const auto lo = std::max(0LL, static_cast<long long>(std::ceil(t - half_width)));
        const auto hi = std::min(n - 1, static_cast<long long>(std::floor(t + half_width)));
        double acc = 0.0;
        for (long long i = lo; i <= hi; ++i) {
            const double u = t - static_cast<double>(i);
            const double r = u / half_width;
            const double window = bessel_i0(kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
            const double arg = 2.0 * cutoff * u;
            const double sinc = arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
            acc += x[static_cast<std::size_t>(i)] * 2.0 * cutoff * sinc * window;
        }
        out[static_cast<std::size_t>(m)] = acc;
    }
    return out;
}

Signal resample(const Signal& signal, int to_rate)
{
    Signal out;
    out.sample_rate = to_rate;
    for (const auto& ch : signal.channels) out.channels.push_back(resample(ch, signal.sample_rate, to_rate));
    return out;
}

}  // namespace stn
