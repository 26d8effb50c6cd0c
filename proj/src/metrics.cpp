#include "stn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stn/fft.hpp"
#include "stn/loudness.hpp"
#include "stn/stft.hpp"
#include "stn/stn.hpp"

namespace stn {

namespace {

constexpr std::size_t kWelchLength = 4096;
constexpr std::size_t kWelchHop = 2048;

std::vector<double> welch_psd(std::span<const double> x)
{
    const auto window = make_window(WindowType::Hann, kWelchLength);
    RealFft fft(kWelchLength);
    std::vector<double> frame(kWelchLength);
    std::vector<Complex> spectrum(kWelchLength / 2 + 1);
    std::vector<double> psd(spectrum.size(), 0.0);

    std::size_t count = 0;
    for (std::size_t start = 0; start == 0 || start + kWelchLength <= x.size(); start += kWelchHop) {
        for (std::size_t i = 0; i < kWelchLength; ++i)
            frame[i] = start + i < x.size() ? x[start + i] * window[i] : 0.0;
        fft.forward(frame, spectrum);
        for (std::size_t k = 0; k < psd.size(); ++k) psd[k] += std::norm(spectrum[k]);
        ++count;
    }
    for (double& p : psd) p /= static_cast<double>(count);
    return psd;
}

std::vector<double> mixdown(const Signal& s)
{
    std::vector<double> m(s.length(), 0.0);
    for (const auto& ch : s.channels)
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += ch[i] / static_cast<double>(s.num_channels());
    return m;
}

}  // namespace

std::vector<ThirdOctaveBand> third_octave_spectrum(std::span<const double> x, double sample_rate, double f_lo,
                                                   double f_hi)
{
    require(sample_rate > 0.0 && f_lo > 0.0 && f_hi > f_lo, "invalid third-octave band range");
    const auto psd = welch_psd(x);
    const double bin_hz = sample_rate / static_cast<double>(kWelchLength);

    std::vector<ThirdOctaveBand> bands;
    const int first = static_cast<int>(std::ceil(10.0 * std::log10(f_lo) - 1e-9));
    const int last = static_cast<int>(std::floor(10.0 * std::log10(f_hi) + 1e-9));
    for (int n = first; n <= last; ++n) {
        const double center = std::pow(10.0, n / 10.0);
        const double lo = center * std::pow(10.0, -0.05);
        const double hi = center * std::pow(10.0, 0.05);
        if (hi > sample_rate / 2.0) break;
        double sum = 0.0;
        std::size_t bins = 0;
        for (std::size_t k = static_cast<std::size_t>(std::ceil(lo / bin_hz)); k < psd.size() && k * bin_hz < hi; ++k) {
            sum += psd[k];
            ++bins;
        }
        if (bins > 0) bands.push_back({center, sum / static_cast<double>(bins)});
    }
    return bands;
}

SpectralDistance spectral_distance(std::span<const double> a, std::span<const double> b, double sample_rate)
{
    const auto sa = third_octave_spectrum(a, sample_rate);
    const auto sb = third_octave_spectrum(b, sample_rate);
    std::vector<double> diff;
    for (std::size_t i = 0; i < std::min(sa.size(), sb.size()); ++i)
        if (sa[i].power > 0.0 && sb[i].power > 0.0) diff.push_back(10.0 * std::log10(sb[i].power / sa[i].power));

    SpectralDistance d;
    d.bands = diff.size();
    if (diff.empty()) return d;
    for (double v : diff) d.level_offset_db += v;
    d.level_offset_db /= static_cast<double>(diff.size());
    for (double v : diff) {
        const double dev = std::abs(v - d.level_offset_db);
        d.distance_db += dev;
        d.max_deviation_db = std::max(d.max_deviation_db, dev);
    }
    d.distance_db /= static_cast<double>(diff.size());
    return d;
}

OnsetMappingError onset_mapping_error(std::span<const double> original, std::span<const double> stretched,
                                      double alpha, double sample_rate, const TransientConfig& config)
{
    const auto stn_config = TwoStageConfig::defaults(sample_rate);
    const auto src = detect_transients(decompose_stn(original, sample_rate, stn_config).transients, sample_rate, config);
    const auto dst = detect_transients(decompose_stn(stretched, sample_rate, stn_config).transients, sample_rate, config);
    OnsetMappingError err;
    if (src.empty() || dst.empty()) return err;

    double total = 0.0;
    for (const auto& e : src) {
        const double expected = alpha * static_cast<double>(e.onset);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& d : dst) best = std::min(best, std::abs(static_cast<double>(d.onset) - expected));
        const double ms = 1000.0 * best / sample_rate;
        total += ms;
        err.max_ms = std::max(err.max_ms, ms);
        ++err.matched;
    }
    err.mean_ms = total / static_cast<double>(err.matched);
    return err;
}

MetricsReport compare(const Signal& original, const Signal& stretched, double alpha)
{
    original.validate();
    stretched.validate();
    require(original.sample_rate == stretched.sample_rate, "sample rates differ");
    require(original.length() > 0, "original signal is empty");
    require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive");

    MetricsReport report;
    report.length_ratio = static_cast<double>(stretched.length()) / static_cast<double>(original.length());
    const auto a = mixdown(original);
    const auto b = mixdown(stretched);
    report.spectrum = spectral_distance(a, b, original.sample_rate);
    report.onsets = onset_mapping_error(a, b, alpha, original.sample_rate);
    try {
        report.loudness_original = integrated_loudness(original);
    } catch (const UnmeasurableLoudness&) {
    }
    try {
        report.loudness_stretched = integrated_loudness(stretched);
    } catch (const UnmeasurableLoudness&) {
    }
    return report;
}

}  // namespace stn
