#include "stn/cqt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "stn/fft.hpp"

namespace stn {

namespace {

struct SparseKernel {
    std::vector<std::size_t> index;     // bins of the full N-point spectrum
    std::vector<Complex> weight;        // conj(A[b]) / N
};

struct Octave {
    std::size_t decimation = 1;
    std::size_t fft_size = 0;
    std::vector<std::size_t> bins;
    std::vector<SparseKernel> kernels;
};

struct KernelBank {
    std::vector<Octave> octaves;   // top octave first, non-decreasing decimation
    std::vector<double> noise_gain;
};

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

KernelBank build_bank(const CqtConfig& config, double sample_rate)
{
    const std::size_t total = config.num_bins(sample_rate);
    const auto bpo = static_cast<std::size_t>(config.bins_per_octave);
    const auto freqs = cqt_center_frequencies(config, sample_rate);
    const double q = config.q_factor();

    std::size_t max_decimation_log2 = 0;
    while (config.hop % (std::size_t{1} << (max_decimation_log2 + 1)) == 0) ++max_decimation_log2;

    KernelBank bank;
    bank.noise_gain.assign(total, 0.0);
    for (std::size_t o = 0; o * bpo < total; ++o) {
        const std::size_t hi = total - o * bpo;
        const std::size_t lo = hi > bpo ? hi - bpo : 0;

        Octave oct;
        oct.decimation = std::size_t{1} << std::min(o, max_decimation_log2);
        const double rate = sample_rate / static_cast<double>(oct.decimation);
        const auto longest = static_cast<std::size_t>(std::ceil(q * rate / freqs[lo]));
        oct.fft_size = std::max<std::size_t>(next_pow2(longest), 16);
        const std::size_t n = oct.fft_size;

        std::vector<Complex> kernel(n), spectrum(n);
        for (std::size_t k = lo; k < hi; ++k) {
            const auto len = static_cast<std::size_t>(std::ceil(q * rate / freqs[k]));
            std::fill(kernel.begin(), kernel.end(), Complex{});
            const std::size_t first = n / 2 - len / 2;
            double wsum = 0.0;
            for (std::size_t i = 0; i < len; ++i)
                wsum += 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(len));
            for (std::size_t i = 0; i < len; ++i) {
                const double w = (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                                       static_cast<double>(len))) / wsum;
                const double t = static_cast<double>(first + i) - static_cast<double>(n / 2);
                kernel[first + i] = std::polar(w, 2.0 * std::numbers::pi * freqs[k] * t / rate);
            }
            complex_fft(kernel, spectrum);

            double peak = 0.0;
            for (const auto& a : spectrum) peak = std::max(peak, std::abs(a));
            SparseKernel sk;
            double kept_energy = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                if (std::abs(spectrum[b]) < config.kernel_threshold * peak) continue;
                sk.index.push_back(b);
                sk.weight.push_back(std::conj(spectrum[b]) / static_cast<double>(n));
                kept_energy += std::norm(spectrum[b]);
            }
            bank.noise_gain[k] = kept_energy / static_cast<double>(n) / static_cast<double>(oct.decimation);
            oct.bins.push_back(k);
            oct.kernels.push_back(std::move(sk));
        }
        bank.octaves.push_back(std::move(oct));
    }
    return bank;
}

std::shared_ptr<const KernelBank> kernel_bank(const CqtConfig& config, double sample_rate)
{
    using Key = std::tuple<std::size_t, double, double, int, double, double>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const KernelBank>> cache;
    const Key key{config.hop, config.f_min, config.resolved_f_max(sample_rate), config.bins_per_octave,
                  config.kernel_threshold, sample_rate};
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    auto bank = std::make_shared<const KernelBank>(build_bank(config, sample_rate));
    cache.emplace(key, bank);
    return bank;
}

/// Ideal half-band lowpass and 2x decimation via one large FFT. Sinusoids
/// below the new Nyquist keep their amplitude.
std::vector<double> decimate_by_two(std::span<const double> x)
{
    constexpr std::size_t kBlock = 4096;
    const std::size_t padded = (x.size() + kBlock) / kBlock * kBlock + kBlock;
    std::vector<double> buf(padded, 0.0);
    std::copy(x.begin(), x.end(), buf.begin());

    const RealFft big(padded);
    std::vector<Complex> spec(big.bins());
    big.forward(buf, spec);

    const RealFft small(padded / 2);
    std::vector<Complex> half(small.bins());
    for (std::size_t b = 0; b + 1 < half.size(); ++b) half[b] = spec[b] * 0.5;
    half.back() = Complex{};
    std::vector<double> out(padded / 2);
    small.inverse(half, out);
    out.resize((x.size() + 1) / 2);
    return out;
}

}  // namespace

std::size_t CqtConfig::num_bins(double sample_rate) const
{
    const double octaves = std::log2(resolved_f_max(sample_rate) / f_min);
    return static_cast<std::size_t>(std::floor(bins_per_octave * octaves + 1e-9));
}

double CqtConfig::q_factor() const
{
    return 1.0 / (std::exp2(1.0 / bins_per_octave) - 1.0);
}

void CqtConfig::validate(double sample_rate) const
{
    require(sample_rate > 0.0, "sample rate must be positive");
    require(hop > 0, "CQT hop must be positive");
    require(bins_per_octave > 0, "bins per octave must be positive");
    require(f_min > 0.0, "f_min must be positive");
    require(resolved_f_max(sample_rate) <= sample_rate / 2.0, "f_max exceeds the Nyquist frequency");
    require(f_min < resolved_f_max(sample_rate), "f_min must be below f_max");
    require(num_bins(sample_rate) >= 1, "CQT range holds no bins");
    require(kernel_threshold >= 0.0 && kernel_threshold < 1.0, "kernel threshold must lie in [0, 1)");
}

std::vector<double> cqt_center_frequencies(const CqtConfig& config, double sample_rate)
{
    std::vector<double> f(config.num_bins(sample_rate));
    for (std::size_t k = 0; k < f.size(); ++k)
        f[k] = config.f_min * std::exp2(static_cast<double>(k) / config.bins_per_octave);
    return f;
}

std::size_t cqt_frame_count(std::size_t length, std::size_t hop)
{
    return (length + hop - 1) / hop;
}

std::vector<double> cqt_noise_gain(const CqtConfig& config, double sample_rate)
{
    config.validate(sample_rate);
    return kernel_bank(config, sample_rate)->noise_gain;
}

CqtFeatures cqt(std::span<const double> x, double sample_rate, const CqtConfig& config)
{
    config.validate(sample_rate);
    require(!x.empty(), "cqt of an empty signal");
    for (double v : x) require(std::isfinite(v), "signal contains non-finite samples");

    const auto bank = kernel_bank(config, sample_rate);
    const std::size_t frames = cqt_frame_count(x.size(), config.hop);

    CqtFeatures features;
    features.config = config;
    features.sample_rate = sample_rate;
    features.values = RealMatrix(config.num_bins(sample_rate), frames);

    std::vector<double> current(x.begin(), x.end());
    std::size_t current_decimation = 1;
    for (const auto& oct : bank->octaves) {
        while (current_decimation < oct.decimation) {
            current = decimate_by_two(current);
            current_decimation *= 2;
        }
        const std::size_t n = oct.fft_size;
        const RealFft fft(n);
        const std::size_t hop = config.hop / oct.decimation;
        const auto count = static_cast<std::ptrdiff_t>(frames);
        const std::span<const double> signal(current);

#pragma omp parallel
        {
            std::vector<double> segment(n);
            std::vector<Complex> spec(fft.bins());
#pragma omp for schedule(static)
            for (std::ptrdiff_t jj = 0; jj < count; ++jj) {
                const auto j = static_cast<std::size_t>(jj);
                const auto first = static_cast<long long>(j * hop) - static_cast<long long>(n / 2);
                for (std::size_t i = 0; i < n; ++i) {
                    const long long s = first + static_cast<long long>(i);
                    segment[i] = (s >= 0 && s < static_cast<long long>(signal.size())) ? signal[static_cast<std::size_t>(s)] : 0.0;
                }
                fft.forward(segment, spec);
                for (std::size_t b = 0; b < oct.bins.size(); ++b) {
                    const auto& kernel = oct.kernels[b];
                    Complex acc{};
                    for (std::size_t e = 0; e < kernel.index.size(); ++e) {
                        const std::size_t idx = kernel.index[e];
                        const Complex xb = idx <= n / 2 ? spec[idx] : std::conj(spec[n - idx]);
                        acc += xb * kernel.weight[e];
                    }
                    features.values(oct.bins[b], j) = std::abs(acc);
                }
            }
        }
    }
    return features;
}

CqtFeatures compress_conditioning(const CqtFeatures& features)
{
    require(!features.log_compressed, "features are already log-compressed");
    CqtFeatures out = features;
    const double denom = std::log(1e4);
    for (double& v : out.values.data()) v = std::clamp(std::log1p(v * 1e4) / denom, 0.0, 1.0);
    out.log_compressed = true;
    return out;
}

}  // namespace stn
