// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "signals.hpp"
#include "stn/cqt.hpp"
#include "stn/kernels.hpp"
#include "stn/loudness.hpp"
#include "stn/median.hpp"
#include "stn/noise_stretch.hpp"
#include "stn/pipeline.hpp"
#include "stn/stn.hpp"

namespace {

constexpr double fs = 44100.0;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& why)
    {
        if (!ok && pass) detail << "first failure: " << why << "; ";
        pass = pass && ok;
    }
};

int failures = 0;

void report(const char* name, const std::function<void(Outcome&)>& body)
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%.1f s) %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

stn::TsmRequest mono_request(std::vector<double> x, double alpha)
{
    stn::TsmRequest r;
    r.input = stn::Signal::mono(std::move(x), static_cast<int>(fs));
    r.alpha = alpha;
    r.config = stn::TsmConfig::defaults(fs);
    r.config.target_lufs.reset();
    return r;
}

std::vector<double> random_signal(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> len(11025, 66150);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = len(rng);
    const std::uint64_t seed = rng();
    auto x = u(rng) < 0.5 ? testsig::white_noise(n, 0.02 + 0.2 * u(rng), seed)
                          : testsig::uniform_noise(n, 0.05 + 0.5 * u(rng), seed);
    const int tones = static_cast<int>(u(rng) * 4);
    for (int t = 0; t < tones; ++t) {
        const auto s = testsig::sine(50.0 + 8000.0 * u(rng), 0.3 * u(rng), n, fs, 6.28 * u(rng));
        for (std::size_t i = 0; i < n; ++i) x[i] += s[i];
    }
    const int clicks = static_cast<int>(u(rng) * 5);
    std::vector<std::size_t> pos;
    for (int c = 0; c < clicks; ++c) pos.push_back(static_cast<std::size_t>(u(rng) * n));
    testsig::add_clicks(x, pos, u(rng), 3.0 + 20.0 * u(rng));
    return x;
}

double snr_of_sum(const std::vector<double>& x, const stn::StnComponents& c)
{
    std::vector<double> sum(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sum[i] = c.sines[i] + c.transients[i] + c.noise[i];
    return oracle::snr_db(x, sum);
}

void perfect_reconstruction(Outcome& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = stn::TwoStageConfig::defaults(fs);
    std::mt19937_64 rng(2024);
    double worst = 1e9;
    for (int i = 0; i < 100; ++i) {
        const auto x = random_signal(rng);
        worst = std::min(worst, snr_of_sum(x, stn::decompose_stn(x, fs, cfg)));
    }
    for (const auto& clip : testsig::six_clips())
        worst = std::min(worst, snr_of_sum(clip.samples, stn::decompose_stn(clip.samples, fs, cfg)));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(worst >= 100.0, "SNR below 100 dB");
    o.check(secs < 60.0, "runtime over one minute");
    o.detail << "106 signals, worst SNR " << worst << " dB, runtime " << secs << " s";
}

void mask_algebra(Outcome& o)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::exponential_distribution<double> e(1.0);
    std::uniform_int_distribution<std::size_t> dim(1, 40);
    double worst_sum = 0.0;
    bool in_range = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t r = dim(rng), c = dim(rng);
        stn::RealMatrix h(r, c), v(r, c);
        for (double& x : h.data()) x = u(rng) < 0.03 ? 0.0 : e(rng);
        for (double& x : v.data()) x = u(rng) < 0.03 ? 0.0 : e(rng);
        const double lo = 0.5 + 0.49 * u(rng);
        const double hi = lo + (1.0 - lo) * (0.001 + 0.999 * u(rng));
        stn::RealMatrix s, t, n;
        stn::kernels::omp::soft_masks(h, v, lo, hi, {s, t, n});
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double a = s.data()[i], b = t.data()[i], d = n.data()[i];
            in_range = in_range && a >= 0 && a <= 1 && b >= 0 && b <= 1 && d >= 0 && d <= 1;
            worst_sum = std::max(worst_sum, std::abs(a + b + d - 1.0));
        }
    }
    double worst_f = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double lo = u(rng) * 0.9;
        const double hi = lo + (1.0 - lo) * (0.001 + 0.999 * u(rng));
        const double a = u(rng);
        worst_f = std::max(worst_f, std::abs(stn::soft_mask(a, hi, lo) - oracle::soft_mask(a, hi, lo)));
    }
    o.check(in_range, "mask outside [0, 1]");
    o.check(worst_sum <= 1e-12, "S+T+N deviates from 1");
    o.check(worst_f <= 1e-12, "f deviates from closed form");
    o.detail << "max |S+T+N-1| = " << worst_sum << ", max |f - closed form| = " << worst_f;
}

void soft_mask_anchors(Outcome& o)
{
    const double mid = stn::soft_mask(0.75, 0.8, 0.7);
    o.check(mid == 0.5, "f(0.75; 0.8, 0.7) != 0.5");
    double worst = 0.0;
    for (auto [hi, lo] : {std::pair{0.8, 0.7}, std::pair{0.85, 0.75}, std::pair{0.9, 0.5}}) {
        for (double eps : {1e-13, 1e-14}) {
            worst = std::max(worst, std::abs(stn::soft_mask(lo + eps, hi, lo) - stn::soft_mask(lo, hi, lo)));
            worst = std::max(worst, std::abs(stn::soft_mask(lo - eps, hi, lo) - stn::soft_mask(lo, hi, lo)));
            worst = std::max(worst, std::abs(stn::soft_mask(hi - eps, hi, lo) - stn::soft_mask(hi, hi, lo)));
            worst = std::max(worst, std::abs(stn::soft_mask(hi + eps, hi, lo) - stn::soft_mask(hi, hi, lo)));
        }
    }
    o.check(worst <= 1e-12, "discontinuity at a boundary");
    o.detail << "f(0.75) = " << mid << ", boundary jump " << worst;
}

void cqt_geometry(Outcome& o)
{
    const stn::CqtConfig cfg;
    const std::size_t bins = cfg.num_bins(fs);
    o.check(bins == 451, "bin count");
    o.check(cfg.hop == 256, "hop");
    const auto f = stn::cqt_center_frequencies(cfg, fs);
    std::mt19937_64 rng(451);
    std::uniform_int_distribution<std::size_t> pick(0, bins - 1);
    int correct = 0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t k = pick(rng);
        const auto c = stn::cqt(testsig::sine(f[k], 0.5, 2 * 44100), fs, cfg);
        const std::size_t j = c.frames() / 2;
        std::size_t best = 0;
        for (std::size_t b = 0; b < c.bins(); ++b)
            if (c.values(b, j) > c.values(best, j)) best = b;
        correct += best == k;
    }
    o.check(correct == 20, "tone localization");
    o.detail << bins << " bins, hop " << cfg.hop << ", " << correct << "/20 tones localized";
}

void samples_per_frame_law(Outcome& o)
{
    o.check(stn::samples_per_frame(2.0, 256) == 512, "spf(2, 256)");
    long worst = 0;
    for (const auto& clip : testsig::six_clips()) {
        for (double a : {4.0, 8.0}) {
            const auto res = stn::tsm(mono_request(clip.samples, a));
            const long diff = std::labs(static_cast<long>(res.output.length()) - std::lround(a * clip.samples.size()));
            worst = std::max(worst, diff);
        }
    }
    o.check(worst <= 1024, "length law");
    o.detail << "spf(2,256) = " << stn::samples_per_frame(2.0, 256) << ", worst length deviation " << worst
             << " samples over 6 clips x {4, 8}";
}

void sine_preservation(Outcome& o)
{
    const auto x = testsig::sine(440.0, 0.5, 2 * 44100);
    const auto res = stn::tsm(mono_request(x, 4.0));
    const auto& y = res.output.channels[0];
    const double ratio = static_cast<double>(y.size()) / x.size();
    const double f = oracle::dominant_frequency(std::span<const double>(y).subspan(y.size() / 4, y.size() / 2), fs, 400, 480);
    o.check(std::abs(f - 440.0) <= 1.0, "frequency");
    o.check(std::abs(ratio - 4.0) <= 0.01, "duration ratio");
    o.detail << "dominant " << f << " Hz, duration ratio " << ratio;
}

void transient_preservation(Outcome& o)
{
    const std::size_t n = 2 * 44100;
    std::vector<std::size_t> pos;
    for (std::size_t p = 6000; p + 2000 < n; p += 9000) pos.push_back(p);
    std::vector<double> x(n, 0.0);
    testsig::add_clicks(x, pos, 0.8, 8.0, 300);
    const auto click = testsig::click(300, 0.8, 8.0);

    double worst_ms = 0.0, worst_corr = 1.0;
    for (double a : {4.0, 8.0}) {
        const auto res = stn::tsm(mono_request(x, a));
        const auto& y = res.output.channels[0];
        for (std::size_t p : pos) {
            const long expect = std::lround(a * p);
            const long max_lag = static_cast<long>(0.02 * fs);
            const auto seg = std::span<const double>(y).subspan(expect - max_lag, 300 + 2 * max_lag);
            long lag = 0;
            const double c = oracle::max_normalized_xcorr(click, seg, 0, 2 * max_lag, &lag);
            worst_ms = std::max(worst_ms, std::abs(static_cast<double>(lag - max_lag)) * 1000.0 / fs);
            worst_corr = std::min(worst_corr, c);
        }
    }
    o.check(worst_ms <= 5.0, "onset position");
    o.check(worst_corr >= 0.99, "waveform correlation");
    o.detail << pos.size() << " clicks x {4, 8}: worst onset error " << worst_ms << " ms, worst correlation "
             << worst_corr;
}

void noise_fidelity(Outcome& o)
{
    const auto x = testsig::white_noise(3 * 44100, 0.1, 99);
    const auto res = stn::tsm(mono_request(x, 4.0));
    std::vector<double> centers;
    const auto a = oracle::third_octave_db(x, fs, 100, 16000, &centers);
    const auto b = oracle::third_octave_db(res.output.channels[0], fs, 100, 16000);
    double worst = 0.0, worst_fc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > worst) {
            worst = std::abs(a[i] - b[i]);
            worst_fc = centers[i];
        }
    o.check(worst <= 3.0, "band deviation above 3 dB");
    o.detail << a.size() << " bands, worst deviation " << worst << " dB at " << worst_fc << " Hz";
}

void pre_echo(Outcome& o)
{
    const std::size_t n = 2 * 44100, onset = 30000;
    std::vector<double> x(n, 0.0);
    for (std::size_t i = onset; i < n; ++i) {
        const double t = (i - onset) / fs;
        x[i] = 0.5 * std::exp(-t / 0.4) * (std::sin(2 * M_PI * 440 * t) + 0.5 * std::sin(2 * M_PI * 880 * t));
    }
    testsig::add_clicks(x, {onset}, 0.8, 10.0, 300);

    const double alpha = 4.0;
    auto on = mono_request(x, alpha);
    auto off = mono_request(x, alpha);
    off.config.envelope_enabled = false;
    const auto yon = stn::tsm(on).output.channels[0];
    const auto yoff = stn::tsm(off).output.channels[0];
    const std::size_t end = static_cast<std::size_t>(alpha * onset - 0.005 * fs);
    const double eon = oracle::energy(std::span<const double>(yon).first(end));
    const double eoff = oracle::energy(std::span<const double>(yoff).first(end));
    const double reduction = 10.0 * std::log10(eoff / std::max(eon, 1e-300));
    o.check(reduction >= 10.0, "reduction below 10 dB");
    o.detail << "pre-onset energy " << eoff << " -> " << eon << " (" << reduction << " dB)";
}

void stereo(Outcome& o)
{
    const auto clips = testsig::six_clips();
    stn::TsmRequest same;
    same.input = stn::Signal(44100, {clips[1].samples, clips[1].samples});
    same.alpha = 4.0;
    const auto r = stn::tsm_stereo(same);
    o.check(r.output.channels[0] == r.output.channels[1], "identical input, different outputs");

    const auto cfg = stn::TwoStageConfig::defaults(fs);
    double worst = 1e9;
    for (std::size_t i = 0; i + 1 < clips.size(); i += 2) {
        const stn::Signal s(44100, {clips[i].samples, clips[i + 1].samples});
        for (std::size_t c = 0; c < 2; ++c) worst = std::min(worst, snr_of_sum(s.channels[c], stn::decompose_stn(s.channel(c), fs, cfg)));
    }
    o.check(worst >= 100.0, "per-channel reconstruction below 100 dB");
    o.detail << "identical channels bit-identical: " << (r.output.channels[0] == r.output.channels[1] ? "yes" : "no")
             << ", worst per-channel SNR " << worst << " dB";
}

void loudness(Outcome& o)
{
    std::mt19937_64 rng(1770);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int file = 0; file < 10; ++file) {
        const std::size_t n = static_cast<std::size_t>((1.0 + 4.0 * u(rng)) * 48000);
        const double level = std::pow(10.0, -(5.0 + 40.0 * u(rng)) / 20.0);
        std::vector<std::vector<double>> chans;
        const int channels = file % 3 == 0 ? 2 : 1;
        for (int c = 0; c < channels; ++c) {
            auto x = file % 2 ? testsig::pink_noise(n, level, rng()) : testsig::white_noise(n, level, rng());
            const auto tone = testsig::sine(100 + 5000 * u(rng), level, n, 48000);
            for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * (file % 4 == 1 && i < n / 3 ? 0.01 : 1.0) + tone[i];
            chans.push_back(std::move(x));
        }
        const stn::Signal s(48000, std::move(chans));
        const auto out = stn::loudness_normalize(s, -23.0);
        worst = std::max(worst, std::abs(oracle::loudness_48k(out.channels) + 23.0));
    }
    o.check(worst <= 0.1, "normalized loudness off target");
    o.detail << "10 files, worst |L + 23| = " << worst << " LU (independent meter)";
}

void median_filters(Outcome& o)
{
    std::mt19937_64 rng(100);
    std::uniform_int_distribution<std::size_t> dim(1, 64);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> small(0, 5);
    int equal = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = dim(rng), c = dim(rng);
        stn::RealMatrix m(r, c);
        for (double& v : m.data()) v = trial % 3 == 0 ? small(rng) : u(rng);
        std::uniform_int_distribution<std::size_t> lt(1, 2 * r), lf(1, 2 * c);
        const std::size_t a = lt(rng), b = lf(rng);
        equal += stn::median_filter_time(m, a) == oracle::median_time(m, a) &&
                 stn::median_filter_freq(m, b) == oracle::median_freq(m, b);
    }
    o.check(equal == 100, "mismatch against brute force");
    o.detail << equal << "/100 matrices exactly equal in both directions";
}

}  // namespace

int main()
{
    report("perfect-reconstruction", perfect_reconstruction);
    report("mask-algebra", mask_algebra);
    report("soft-mask-anchors", soft_mask_anchors);
    report("cqt-geometry", cqt_geometry);
    report("samples-per-frame-law", samples_per_frame_law);
    report("sine-preservation", sine_preservation);
    report("transient-preservation", transient_preservation);
    report("noise-spectral-fidelity", noise_fidelity);
    report("pre-echo-compensation", pre_echo);
    report("stereo", stereo);
    report("loudness-normalization", loudness);
    report("median-filters", median_filters);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
